"""conv(A) + int K against int(conv(A) + K), decided two independent ways.

Run:  python demos/interior_identity.py
"""

import random

from svo.cones import Cone, PointSet, interior_of_hull_plus_cone, set_plus_cone_membership
from svo.rational import q

rng = random.Random(0)
K = Cone.from_generators([(1, 0), (1, 1)])  # a skewed cone; normals (0,1) and (1,-1)
print("normals of K:", [[str(c) for c in a] for a in K.normals])

A = [(0, 0), (2, 0), (1, 1)]
agree = 0
for _ in range(500):
    y = (q(rng.randint(-8, 8)) / 4, q(rng.randint(-8, 8)) / 4)
    lhs = set_plus_cone_membership(y, PointSet(A, "hull"), K, interior=True)  # strict LP on H-description
    rhs = interior_of_hull_plus_cone(y, A, K)  # push lengths from generators
    agree += lhs == rhs
print(f"{agree}/500 grid queries agree")

# a boundary point: (2,0) lies in A + K but not in its interior
print("(2,0) interior?", set_plus_cone_membership((2, 0), PointSet(A, "hull"), K, interior=True))
print("(2,0) weak?    ", set_plus_cone_membership((2, 0), PointSet(A, "hull"), K))
