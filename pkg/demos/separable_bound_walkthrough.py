"""Walkthrough: how far below the true maximal correlation can the
pairwise-marginal bound sit?

We use the canonical two-feature example whose pairwise marginals admit
exactly one joint distribution, so the minimum of the maximal correlation
over the marginal class is the value at that single joint, and any slack in
the bound is directly visible.
"""

import maxcorr as mx

joint = mx.nonadditive_fixture()
spec = joint.spec
print("Atoms of the joint (x1, x2, y) -> probability:")
for idx in range(spec.n_states):
    for y in (0, 1):
        print(f"  {spec.decode(idx) + (y,)} -> {joint.prob[idx, y]:.1f}")

# The bound only ever sees these pairwise tables.
marginals = mx.pairwise_from_joint(joint)
print("\nPairwise feature table P(X1=k, X2=l):")
print(marginals.xx[(0, 1)])
print("Feature-target tables P(Xi=k, Y=y):")
print(marginals.xy)

# Quadratic system over the one-hot encoding of (X1, X2).
system = mx.assemble_qd(marginals)
print("\nQ =")
print(system.q)
print("d =", system.d, "   P(Y=1) =", system.p_y1)

# The quadratic's minimum, computed two independent ways.
closed = mx.gamma_lb_closed(system)
iterative = mx.gamma_lb_iterative(system)
print(f"\ngamma via pseudoinverse:       {closed:.12f}")
print(f"gamma via conjugate gradients: {iterative.gamma_lb:.12f}")
print(f"minimum-norm minimizer z* =    {iterative.z_star}")

bound = mx.rho_lb(system)
exact = mx.hgr_svd(mx.flatten_joint(joint)).rho
print(f"\nseparable lower bound: {bound:.6f}")
print(f"exact maximal corr.:   {exact:.6f}")
print(f"gap:                   {exact - bound:.6f}")

# The certificate explains the gap: no quadratic minimizer satisfies the
# per-block max bounds, so no distribution with these marginals has an
# additive conditional mean, and the bound cannot be attained.
cert = mx.check_tightness(system)
print(f"\ntightness verdict: {cert.verdict}")
print(f"  min over minimizers of max(h(z), h(-z)) = {cert.lp_value:.6f}  (needs <= 0.5)")
print(f"  at the reported z*: h(z*) = {cert.h_pos:.6f}, h(-z*) = {cert.h_neg:.6f}")

# Additivity fails concretely: the conditional mean violates the rectangle
# identity that every additive function satisfies.
cond = mx.conditional_expectation(joint)
e = {spec.decode(i): cond.values[i] for i in range(spec.n_states)}
print("\nConditional means E[Y | X1=a, X2=b]:")
print(f"  E[0,0] + E[1,1] = {e[(0, 0)] + e[(1, 1)]:.4f}")
print(f"  E[1,0] + E[0,1] = {e[(1, 0)] + e[(0, 1)]:.4f}   (additive would force equality)")
decomposition = mx.is_additive(joint)
print(f"best additive fit residual: {decomposition.residual:.4f} -> additive = {decomposition.additive}")
