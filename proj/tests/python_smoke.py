"""Smoke test for the python bindings (run with PYTHONPATH set to the build dir)."""

import cmath
import math

import csduality as csd


def approx(a, b, tol=1e-10):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    # Sequences and normalization.
    seq = csd.FactorialSequence.poisson(128)
    assert seq.n_max == 128
    approx(seq.log_factorial(5), math.log(120.0), 1e-12)
    approx(csd.normalization(seq, 1.0).value, math.e, 1e-12)
    radius, estimated = csd.FactorialSequence.su11(2, 256).radius_of_convergence()
    approx(radius, 1.0, 0.0)

    # Distribution families.
    approx(csd.pmf_poisson(2, 1.0), math.exp(-1.0) / 2.0, 1e-14)
    approx(csd.pmf_binomial(2, 4, 0.5), 0.375, 1e-14)
    approx(csd.pdf_gamma(3, 2.0), 2.0 * math.exp(-2.0), 1e-14)

    fam = csd.poisson_family(256)
    approx(csd.compute_cn(fam, 3), 1.0, 1e-8)
    approx(csd.expectation_Y(fam, 1.7), 1.7, 1e-10)
    approx(csd.expectation_Lambda(csd.poisson_dual(256), 4), 5.0, 1e-8)

    post = csd.posterior_density(fam, 3)
    approx(post.pdf(0, 2.0), csd.pdf_gamma(4, 2.0), 1e-8)

    # Coherent states and kernels.
    state = csd.cs_nonlinear(seq, csd.CSLabel(1.0, 0.0))
    approx(csd.prob_extract(state, 0), math.exp(-1.0), 1e-12)
    vac = csd.cs_nonlinear(seq, csd.CSLabel(0.0, 0.0))
    approx(abs(csd.overlap(state, vac)), math.exp(-0.5), 1e-12)

    ke = csd.KernelEvaluator(seq)
    k11 = csd.kernel_eval(ke, csd.CSLabel(1.0, 0.0), csd.CSLabel(1.0, 0.0))
    approx(k11.real, math.e, 1e-10)
    approx(k11.imag, 0.0, 1e-12)

    # Resolution of identity.
    import numpy as np

    G = np.asarray(csd.gram_matrix(fam, 6))
    assert np.abs(G - np.eye(6)).max() < 1e-8
    report = csd.moment_check(seq, csd.poisson_measure(), 10)
    assert report.max_residual < 1e-9

    # Matrix coherent states.
    U = csd.haar_unitary(2, 7)
    assert np.abs(np.asarray(U) @ np.asarray(U).conj().T - np.eye(2)).max() < 1e-12
    label = csd.make_label(U, [1.0, 2.0], [0.0, 0.3])
    total = sum(
        csd.vcs_build(label, i, seq).squared_norm() for i in range(2)
    )
    approx(total, 1.0, 1e-10)
    P1 = np.asarray(csd.partial_trace_prob(label, 1, seq))
    approx(
        P1.trace().real,
        0.5 * (csd.pmf_poisson(1, 1.0) + csd.pmf_poisson(1, 2.0)),
        1e-12,
    )
    approx(
        csd.joint_prob([1.0, 2.0], [0.0, 0.0], [1, 2], seq),
        csd.pmf_poisson(1, 1.0) * csd.pmf_poisson(2, 2.0),
        1e-12,
    )

    # Bayes lab.
    coin = csd.binomial_p_family(10)
    summary = csd.posterior_summary(coin, 7, 0.95)
    approx(summary.point_estimate, 2.0 / 3.0, 1e-3)
    assert 0.0 < summary.interval.lo < summary.interval.hi <= 1.0
    assert csd.simulate(coin, 1.0, 3) == 10

    print("python smoke test passed")


if __name__ == "__main__":
    main()
