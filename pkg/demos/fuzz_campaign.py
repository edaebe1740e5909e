"""A small seeded fuzz campaign, with archived counterexamples replayed.

Run:  python demos/fuzz_campaign.py [seed] [count]
"""

import sys
import tempfile

from svo.harness import FuzzConfig, emit_report, fuzz_instances, replay

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 7
count = int(sys.argv[2]) if len(sys.argv) > 2 else 25

out = tempfile.mkdtemp(prefix="svo-demo-")
config = FuzzConfig(seed=seed, count=count, plant_slater=True)

results, archived = [], []
for bundle in fuzz_instances(config, out):
    results.extend(bundle.results)
    archived.extend((p, bundle) for p in bundle.archived)

print(emit_report(results, "human"))

# every archived file is a normal instance file and reproduces its results
for path, bundle in archived[:5]:
    mode = path.rsplit("-", 1)[1][:-5]
    same = replay(path) == [r for r in bundle.results if r.mode == mode]
    print(path, "replays identically:", same)

# the reported-violated bare reverse cases, with the z* that exposed them
bare = [r for r in results if r.property_id == "bare_reverse" and r.status == "reported-violated"]
for r in bare[:5]:
    print(r.instance_ref, "x0 =", r.x0, "eps =", r.epsilon, "z* =", r.witness["z_star"])
