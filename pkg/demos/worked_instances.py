"""Walk through the two worked instances W1 and W2.

Run:  python demos/worked_instances.py
"""

from svo.criteria import check_l_wmin, check_v_wmin
from svo.harness import canon
from svo.instance import RankOneOperator, build_Q, reference_instance
from svo.lagrange import characterize_LPT, check_wmin_LPT, find_multiplier, slackness_report

w1 = reference_instance("W1", "convexified")

# two labels: a is feasible (g(a) = {-1}), b is not (g(b) = {1})
Q = build_Q(w1)
print("Q vertices", canon(Q.vertices))
print("Q rays    ", canon(Q.rays))

v = check_v_wmin(w1, "a")
print("W1 v-wmin at a:", v.holds, "y0 =", canon(v.certifying_y0))
print("W1 l-wmin at a:", check_l_wmin(w1, "a").holds)

cert = find_multiplier(w1, "a")
print("multiplier y* =", canon(cert.y_star), "z* =", canon(cert.z_star), "inf_Q =", canon(cert.inf_Q_value))

# W2 moves f(b) to (-1,-1); mixing a and b half/half is now feasible and better
w2 = reference_instance("W2", "convexified")
v = check_v_wmin(w2, "a")
print("W2 v-wmin at a:", v.holds, "beaten by", canon(v.violation.candidate), "->", canon(v.violation.point))
print("W2 multiplier at eps=0:", find_multiplier(w2, "a"))

# with eps = 1 the half/half point no longer beats (0,0) - e
cert = find_multiplier(w2, "a", 1)
rep = slackness_report(cert, w2, "a")
print("W2 eps=1: z* =", canon(cert.z_star), "min slack =", canon(rep.min_slack))

# the Lagrangian problem with z* = 1 is solved by a, although a is not a solution
T = RankOneOperator((1,), (1, 1))
print("W2 a solves LP_T (z*=1):", check_wmin_LPT(w2, "a", T).holds)
wit = characterize_LPT(w2, "a", T)
print("   witness y0 =", canon(wit.y0), "z0 =", canon(wit.z0), "z*(z0) =", canon(wit.z0[0]))
print("   with z*(z0) >= 0 required:", characterize_LPT(w2, "a", T, require_nonneg_slack=True))
