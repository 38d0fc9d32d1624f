"""Cross-oracle verification suite.

Each check in rules/verify_checks.yaml maps to a function taking the level
parameters and returning (details, failures). A check passes when it returns
no failures; a QwalkError raised inside a check is recorded as a failure.
"""

import logging
import time
from fractions import Fraction
from math import comb
from typing import Any, Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from qwalk.errors import QwalkError
from qwalk.freeprob import (
    all_set_partitions,
    asymptotic_law,
    delta_pair,
    dilate,
    enumerate_nc,
    free_poisson_law,
    free_poisson_moment,
    kreweras,
    law_moment,
)
from qwalk.gamma import (
    GammaContext,
    GeneratorLetter,
    SemidirectElt,
    ThetaTable,
    embed_generator,
    faithfulness_probe,
    rep_pi_k,
    semidirect_inverse,
    t_word,
    verify_model_rep,
    walk_moment,
    word_product,
)
from qwalk.groups import AbelianGroup, fourier_matrix
from qwalk.hadamard import SIDES, deformed_tensor, generic_q, validate_hadamard
from qwalk.logging import AuditLogger
from qwalk.models import (
    block_ranks,
    check_positive,
    check_projective,
    deform,
    dual,
    fourier_model,
    from_hadamard,
    verify_wreath_structure,
)
from qwalk.moments import (
    duality_check,
    haar_moment,
    phase_sum_moment,
    tensor_bound_check,
    transfer_matrix,
    transfer_spectrum,
    truncated_moment,
)
from qwalk.montecarlo import mc_moment, mc_spectrum, spectrum_ks
from qwalk.rules import LEVELS, load_verify_checks

from .reports import CheckResult, SuiteReport

logger = logging.getLogger(__name__)

Outcome = Tuple[Dict[str, Any], List[str]]

Z2 = AbelianGroup.cyclic(2)


def _deformed(X: AbelianGroup, Y: AbelianGroup, seed: int):
    Q = generic_q(X, Y, seed=seed)
    return deform(fourier_model(X), fourier_model(Y), Q, "right"), Q


def check_groups(params: Dict[str, Any], **_) -> Outcome:
    failures, worst = [], 0.0
    for label in params["groups"]:
        X = AbelianGroup.parse(label)
        F, add, n = fourier_matrix(X), X.add_table(), X.size
        defects = {
            "unitarity": float(np.max(np.abs(F @ F.conj().T - n * np.eye(n)))),
            "first argument": float(np.max(np.abs(F[add, :] - F[:, None, :] * F[None, :, :]))),
            "second argument": float(np.max(np.abs(F[:, add] - F[:, :, None] * F[:, None, :]))),
        }
        for name, defect in defects.items():
            worst = max(worst, defect)
            if defect > params["tol"]:
                failures.append(f"{label}: character {name} defect {defect:.3e}")
    return {"groups": params["groups"], "worst_defect": worst}, failures


def check_hadamard(params: Dict[str, Any], **_) -> Outcome:
    failures, worst = [], 0.0
    pool = [AbelianGroup.parse(label) for label in params["groups"]]
    rng = np.random.default_rng(params["seed"])
    for trial in range(params["n_triples"]):
        X, Y = (pool[int(j)] for j in rng.integers(len(pool), size=2))
        Q = generic_q(X, Y, seed=params["seed"] + trial)
        for side in SIDES:
            report = validate_hadamard(deformed_tensor(fourier_matrix(X), fourier_matrix(Y), Q, side))
            worst = max(worst, report.max_modulus_defect, report.max_orthogonality_defect)
            if not report.is_hadamard:
                failures.append(f"trial {trial}: {side} product over {X.label}, {Y.label} is not Hadamard")
    for X in pool:
        ranks = block_ranks(from_hadamard(fourier_matrix(X)))
        if not np.all(ranks == 1):
            failures.append(f"{X.label}: block ranks {sorted(set(ranks.ravel().tolist()))}, expected 1")
    return {"n_triples": params["n_triples"], "worst_defect": worst}, failures


def _random_element(ctx: GammaContext, rng: np.random.Generator) -> SemidirectElt:
    vec = rng.integers(-5, 6, size=ctx.vec_shape)
    return SemidirectElt(ctx, tuple(vec.ravel().tolist()), int(rng.integers(ctx.y.size)))


def check_semidirect(params: Dict[str, Any], **_) -> Outcome:
    failures = []
    rng = np.random.default_rng(params["seed"])
    for x_label, y_label in params["pairs"]:
        X, Y = AbelianGroup.parse(x_label), AbelianGroup.parse(y_label)
        ctx, pair = GammaContext(X, Y), f"{x_label},{y_label}"
        for _ in range(params["n_triples"]):
            g, h, k = (_random_element(ctx, rng) for _ in range(3))
            if (g * h) * k != g * (h * k):
                failures.append(f"{pair}: (gh)k != g(hk)")
                break
            if not (g * semidirect_inverse(g)).is_identity or not (semidirect_inverse(g) * g).is_identity:
                failures.append(f"{pair}: g g^-1 is not the identity")
                break
        add = Y.add_table()
        for i in range(X.size):
            for c in range(Y.size):
                for d in range(Y.size):
                    first = embed_generator(ctx, GeneratorLetter(i, c))
                    second = embed_generator(ctx, GeneratorLetter(i, d))
                    if first * second != embed_generator(ctx, GeneratorLetter(i, int(add[c, d]))):
                        failures.append(f"{pair}: copy {i} of Y is not embedded as a group")
        Q = generic_q(X, Y, seed=params["seed"])
        shape = (X.size - 1, Y.size - 1)
        for _ in range(params["n_words"]):
            g = word_product(ctx, t_word(ctx, rng.integers(-3, 4, size=shape)))
            h = word_product(ctx, t_word(ctx, rng.integers(-3, 4, size=shape)))
            if g.y != 0 or g * h != h * g:
                failures.append(f"{pair}: zero-sum words do not commute in the normal subgroup")
                break
            word = t_word(ctx, rng.integers(-3, 4, size=shape))
            letters = [
                GeneratorLetter(int(i), int(c))
                for i, c in zip(rng.integers(X.size, size=12), rng.integers(Y.size, size=12))
            ]
            for k in range(X.size):
                image = rep_pi_k(Q, k, letters)
                if not np.allclose(image @ image.conj().T, np.eye(Y.size), atol=1e-12):
                    failures.append(f"{pair}: pi^{k} of a random word is not unitary")
                diagonal = rep_pi_k(Q, k, word)
                if not np.allclose(diagonal, np.diag(np.diag(diagonal)), atol=1e-12):
                    failures.append(f"{pair}: pi^{k} of a zero-sum word is not diagonal")
    return {"pairs": params["pairs"], "n_triples": params["n_triples"]}, failures


def check_transfer(params: Dict[str, Any], **_) -> Outcome:
    failures, radius = [], 0.0
    fourier = [fourier_model(AbelianGroup.parse(label)) for label in params["groups"]]
    deformed = [_deformed(Z2, Z2, seed)[0] for seed in range(params["n_q"])]
    p_max = params["p_max"]
    for U in fourier + deformed:
        for p in range(1, p_max + 1):
            eigenvalues = transfer_spectrum(transfer_matrix(U, p).matrix)
            top = float(np.max(np.abs(eigenvalues)))
            radius = max(radius, top)
            if top > 1 + 1e-8:
                failures.append(f"{U.name}, p={p}: spectral radius {top:.12f}")
    for U in fourier:
        report = check_positive(U, p_max, tol=1e-10)
        if not report.positive:
            failures.append(f"{U.name}: T_{report.worst_p} has entry {report.worst_entry:.3e}")
    for W in deformed:
        for p in range(1, p_max + 1):
            spectral = haar_moment(W, p, "spectral").value
            cesaro = haar_moment(W, p, "cesaro", rounds=params["cesaro_rounds"])
            if abs(cesaro.value - spectral) > max(1e-3, cesaro.extras["tail_bound"]):
                failures.append(f"{W.name}, p={p}: cesaro {cesaro.value} vs spectral {spectral}")
        p, rounds = params["free_p"], params["free_rounds"]
        dense = haar_moment(W, p, "cesaro", rounds=rounds).value
        free = haar_moment(W, p, "cesaro", rounds=rounds, dense_rows=1, samples=W.index_size ** p).value
        if abs(free - dense) > 1e-9:
            failures.append(f"{W.name}, p={p}: matrix-free cesaro {free} vs dense {dense}")
    return {"models": len(fourier) + len(deformed), "spectral_radius": radius}, failures


def check_montecarlo(params: Dict[str, Any], **_) -> Outcome:
    failures = []
    M, N, p, samples, seed = params["m"], params["n"], params["p"], params["samples"], params["seed"]
    chunk = params["chunk_size"]
    first = mc_moment(M, N, p, samples, seed, threads=1, chunk_size=chunk)
    again = mc_moment(M, N, p, samples, seed, threads=1, chunk_size=chunk)
    threaded = mc_moment(M, N, p, samples, seed, threads=params["threads"], chunk_size=chunk)
    doubled = mc_moment(M, N, p, 2 * samples, seed, threads=1, chunk_size=chunk)
    if (first.value, first.uncertainty) != (again.value, again.uncertainty):
        failures.append(f"seed {seed} is not reproducible: {first.value} vs {again.value}")
    if (first.value, first.uncertainty) != (threaded.value, threaded.uncertainty):
        failures.append(f"{params['threads']} threads give {threaded.value}, 1 thread gives {first.value}")
    if not doubled.uncertainty < first.uncertainty:
        failures.append(f"standard error {doubled.uncertainty:.3e} at 2x samples, {first.uncertainty:.3e} at 1x")
    return {"value": first.value, "stderr": first.uncertainty, "stderr_doubled": doubled.uncertainty}, failures


def check_laws(params: Dict[str, Any], **_) -> Outcome:
    failures, worst = [], 0.0
    for t in params["rates"]:
        law = free_poisson_law(t)
        for p in range(1, params["dilation_max"] + 1):
            partitions = enumerate_nc(p)
            lhs = sum(t ** (pi.size - p) for pi in partitions)
            via_kreweras = t * sum(t ** -kreweras(pi).size for pi in partitions)
            expected = t * free_poisson_moment(1 / t, p)
            if abs(lhs - via_kreweras) > 1e-12 * max(1.0, lhs) or abs(lhs - expected) > 1e-9 * max(1.0, lhs):
                failures.append(f"t={t}, p={p}: m_p(pi_t)/t^p = {lhs}, t m_p(pi_1/t) = {expected}")
            dilated = law_moment(dilate(law, 1 / t), p)
            if abs(dilated - expected) > 1e-6 * max(1.0, expected):
                failures.append(f"t={t}, p={p}: dilated law moment {dilated} vs {expected}")
    for alpha, beta in params["shapes"]:
        A = asymptotic_law(alpha, beta, params["k"])
        for p in range(1, params["moment_max"] + 1):
            predicted = A.predicted_moment(p)
            defect = abs(law_moment(A.law, p) - predicted) / predicted
            worst = max(worst, defect)
            if defect > params["rel_tol"]:
                failures.append(f"alpha={alpha}, beta={beta}, p={p}: quadrature defect {defect:.3e}")
    return {"asymptotic_defect": worst}, failures


def check_structure(params: Dict[str, Any], **_) -> Outcome:
    failures = []
    for label in params["groups"]:
        X = AbelianGroup.parse(label)
        for U in (fourier_model(X), from_hadamard(fourier_matrix(X))):
            if not check_projective(U).passed:
                failures.append(f"{U.name} over {label} is not projective")
    for x_label, y_label in params["pairs"]:
        X, Y = AbelianGroup.parse(x_label), AbelianGroup.parse(y_label)
        for seed in range(params["n_q"]):
            W, _ = _deformed(X, Y, seed)
            if not check_projective(W).passed:
                failures.append(f"deformed {x_label},{y_label} seed {seed} is not projective")
            if not verify_wreath_structure(W, X, Y).passed:
                failures.append(f"deformed {x_label},{y_label} seed {seed} breaks the block-sum structure")
    return {"groups": params["groups"], "pairs": params["pairs"], "n_q": params["n_q"]}, failures


def check_duality(params: Dict[str, Any], **_) -> Outcome:
    failures, worst_flip = [], 0.0
    models = [fourier_model(Z2), fourier_model(AbelianGroup.cyclic(3))]
    for seed in range(params["n_q"]):
        W, Q = _deformed(Z2, Z2, seed)
        models.append(W)
        U = V = fourier_model(Z2)
        flipped = deform(dual(U), dual(V), Q, "left")
        worst_flip = max(worst_flip, float(np.max(np.abs(dual(W).blocks - flipped.blocks))))
    for U in models:
        report = duality_check(U, params["p_max"], params["r_max"])
        if not report.passed:
            failures.append(f"{U.name}: reciprocity defect {report.worst_defect:.3e} at {report.worst_pair}")
    if worst_flip > 1e-12:
        failures.append(f"dual of a right deformation differs from the left deformation by {worst_flip:.3e}")
    return {"models": len(models), "dual_deform_defect": worst_flip}, failures


def check_four_oracles(params: Dict[str, Any], **_) -> Outcome:
    failures, values = [], {}
    W, _ = _deformed(Z2, Z2, params["seed"])
    for p in params["p_values"]:
        multiset = walk_moment(Z2, Z2, p, "multiset")
        group = walk_moment(Z2, Z2, p, "group")
        exact = float(multiset.exact)
        spectral = haar_moment(W, p, "spectral").value
        cesaro = haar_moment(W, p, "cesaro", rounds=params["cesaro_rounds"]).value
        mc = mc_moment(2, 2, p, params["mc_samples"], params["seed"])
        values[str(p)] = {
            "exact": str(multiset.exact),
            "spectral": spectral,
            "cesaro": cesaro,
            "montecarlo": mc.value,
            "stderr": mc.uncertainty,
        }
        if multiset.exact != group.exact:
            failures.append(f"p={p}: multiset {multiset.exact} != group {group.exact}")
        if abs(spectral - exact) > 1e-6:
            failures.append(f"p={p}: spectral {spectral} vs exact {exact}")
        if abs(cesaro - exact) > 1e-3:
            failures.append(f"p={p}: cesaro {cesaro} vs exact {exact}")
        if abs(mc.value - exact) > max(4 * mc.uncertainty, 1e-12):
            failures.append(f"p={p}: montecarlo {mc.value} +- {mc.uncertainty} vs exact {exact}")
    return values, failures


def check_second_moment(params: Dict[str, Any], **_) -> Outcome:
    failures = []
    for M in params["sizes"]:
        for N in params["sizes"]:
            value = walk_moment(AbelianGroup.cyclic(M), AbelianGroup.cyclic(N), 2).exact
            if value != M + N - 1:
                failures.append(f"M={M}, N={N}: c_2 = {value}, expected {M + N - 1}")
    return {"sizes": params["sizes"]}, failures


def check_deformed_moments(params: Dict[str, Any], **_) -> Outcome:
    failures, worst = [], 0.0
    U = V = fourier_model(Z2)
    for seed in range(params["n_q_expansion"]):
        W, Q = _deformed(Z2, Z2, seed)
        for p in (1, 2):
            for r in (1, 2):
                defect = abs(phase_sum_moment(U, dual(V), Q, p, r) - truncated_moment(W, p, r))
                worst = max(worst, defect)
                if defect > 1e-9:
                    failures.append(f"seed {seed}, p={p}, r={r}: expansion defect {defect:.3e}")
    order = params["order_max"]
    for seed in range(params["n_q_bound"]):
        Q = generic_q(Z2, Z2, seed=seed)
        for p in range(1, order + 1):
            for r in range(1, order + 1):
                report = tensor_bound_check(U, V, Q, p, r)
                if not report.holds:
                    failures.append(f"seed {seed}, p={p}, r={r}: bound slack {report.slack:.3e}")
    return {"expansion_defect": worst}, failures


def check_representation(params: Dict[str, Any], theta_fn: Optional[ThetaTable] = None, **_) -> Outcome:
    failures, details = [], {}
    for x_label, y_label in params["pairs"]:
        X, Y = AbelianGroup.parse(x_label), AbelianGroup.parse(y_label)
        W, Q = _deformed(X, Y, params["seed"] + 1)
        rep = verify_model_rep(W, Q, theta_fn=theta_fn)
        probe = faithfulness_probe(Q, n_words=params["n_words"], seed=params["seed"], theta_fn=theta_fn)
        details[f"{x_label},{y_label}"] = {
            "rep_deviation": rep.max_deviation,
            "probe_detected": probe.detected,
            "probe_min_spread": probe.min_spread,
        }
        if not rep.passed:
            failures.append(f"{x_label},{y_label}: model action deviates by {rep.max_deviation:.3e} at {rep.worst_case}")
        if not probe.passed:
            failures.append(f"{x_label},{y_label}: {probe.n_words - probe.detected} T-words act as scalars")
    return details, failures


def check_free_probability(params: Dict[str, Any], **_) -> Outcome:
    failures = []
    for p in range(1, params["catalan_max"] + 1):
        count = len(enumerate_nc(p))
        if count != comb(2 * p, p) // (p + 1):
            failures.append(f"|NC({p})| = {count}")
    for p in range(1, params["kreweras_max"] + 1):
        for pi in enumerate_nc(p):
            if pi.size + kreweras(pi).size != p + 1:
                failures.append(f"Kreweras identity fails for {pi}")
    worst = 0.0
    for t in params["rates"]:
        law = free_poisson_law(t)
        for p in range(1, params["moment_max"] + 1):
            expected = free_poisson_moment(t, p)
            defect = abs(law_moment(law, p) - expected) / max(1.0, expected)
            worst = max(worst, defect)
            if defect > 1e-6:
                failures.append(f"t={t}, p={p}: quadrature defect {defect:.3e}")
    for p in range(1, params["delta_max"] + 1):
        partitions = list(all_set_partitions(p))
        for pi in partitions:
            for sigma in partitions:
                if delta_pair(pi, sigma) and pi.size + sigma.size > p + 1:
                    failures.append(f"delta = 1 with |pi| + |sigma| > p + 1 for {pi}, {sigma}")
    return {"quadrature_defect": worst}, failures


def _strictly_decreasing(values: Iterable[Fraction]) -> bool:
    values = list(values)
    return all(b < a for a, b in zip(values, values[1:]))


def check_asymptotics(params: Dict[str, Any], **_) -> Outcome:
    failures, details = [], {}
    for K in params["k_square_c2"]:
        Z = AbelianGroup.cyclic(K)
        c2 = walk_moment(Z, Z, 2).exact
        if c2 / K != 2 - Fraction(1, K):
            failures.append(f"alpha=beta=1, K={K}: c_2/K = {c2 / K}")
    gaps = []
    for K in params["k_square"]:
        Z = AbelianGroup.cyclic(K)
        c3 = walk_moment(Z, Z, 3).exact
        gaps.append(abs(c3 / K ** 2 - 5))
    details["square_c3_gaps"] = [float(g) for g in gaps]
    if not _strictly_decreasing(gaps):
        failures.append(f"alpha=beta=1: |c_3/K^2 - 5| not decreasing: {details['square_c3_gaps']}")
    gaps = []
    predictor = asymptotic_law(2.0, 1.0, 1.0).predicted_moment(3)
    for K in params["k_two_one"]:
        X, Y = AbelianGroup.cyclic(2 * K), AbelianGroup.cyclic(K)
        c2 = walk_moment(X, Y, 2).exact
        if c2 != 3 * K - 1:
            failures.append(f"alpha=2, beta=1, K={K}: c_2 = {c2}, expected {3 * K - 1}")
        c3 = walk_moment(X, Y, 3).exact
        gaps.append(abs(c3 / K ** 2 - Fraction(predictor)))
    details["two_one_c3_gaps"] = [float(g) for g in gaps]
    if not _strictly_decreasing(gaps):
        failures.append(f"alpha=2, beta=1: |c_3/K^2 - 11| not decreasing: {details['two_one_c3_gaps']}")
    return details, failures


def check_spectrum(params: Dict[str, Any], **_) -> Outcome:
    failures = []
    size = params["size"]
    hist = mc_spectrum(size, size, params["samples"], params["seed"])
    ks = spectrum_ks(hist, free_poisson_law(1.0))
    if ks > params["ks_max"]:
        failures.append(f"KS distance to pi_1 is {ks:.3f}")
    rect = mc_spectrum(params["mean_m"], params["mean_n"], params["samples"], params["seed"])
    if abs(rect.mean - 1.0) > 0.02:
        failures.append(f"mean eigenvalue of A/N is {rect.mean:.4f}")
    return {"ks": ks, "mass": hist.mass, "mean": rect.mean}, failures


def check_classical(params: Dict[str, Any], **_) -> Outcome:
    failures, values = [], {}
    U = fourier_model(Z2)
    for p in range(1, params["p_max"] + 1):
        value = haar_moment(U, p, "spectral").value
        values[str(p)] = value
        if value != 2 ** (p - 1):
            failures.append(f"p={p}: Haar moment {value}, expected {2 ** (p - 1)}")
    return values, failures


CHECKS: Dict[str, Callable[..., Outcome]] = {
    "GROUP-001": check_groups,
    "HAD-001": check_hadamard,
    "STRUCT-001": check_structure,
    "DUAL-001": check_duality,
    "TRANSFER-001": check_transfer,
    "ORACLE-001": check_four_oracles,
    "WALK-001": check_second_moment,
    "SUM-001": check_deformed_moments,
    "GAMMA-001": check_semidirect,
    "REP-001": check_representation,
    "FREE-001": check_free_probability,
    "LAW-001": check_laws,
    "ASYMPT-001": check_asymptotics,
    "SPECTRUM-001": check_spectrum,
    "MC-001": check_montecarlo,
    "HAAR-001": check_classical,
}


def verify_suite(
    level: str = "quick",
    only: Optional[Iterable[str]] = None,
    *,
    theta_fn: Optional[ThetaTable] = None,
    audit: Optional[AuditLogger] = None,
    run_id: Optional[str] = None,
) -> SuiteReport:
    """Run the planned checks at one level.

    Args:
        level: "quick" or "full"
        only: Restrict to these check ids
        theta_fn: Replacement theta table, for mutation runs
        audit: Audit logger receiving one event per check
        run_id: Run id recorded in the report and the audit log

    Raises:
        ValueError: If the level or a requested check id is unknown
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}, got {level!r}")
    plan = load_verify_checks()
    if only:
        wanted = set(only)
        unknown = wanted - {check["id"] for check in plan}
        if unknown:
            raise ValueError(f"unknown check ids: {sorted(unknown)}")
        plan = [check for check in plan if check["id"] in wanted]

    report = SuiteReport(level=level, **({"run_id": run_id} if run_id else {}))
    started = time.perf_counter()
    for check in plan:
        fn = CHECKS[check["id"]]
        t0 = time.perf_counter()
        try:
            details, failures = fn(check["levels"][level], theta_fn=theta_fn)
        except QwalkError as exc:
            details, failures = {}, [f"{type(exc).__name__}: {exc}"]
        result = CheckResult(
            id=check["id"],
            category=check["category"],
            description=check["description"],
            passed=not failures,
            wall_time_ms=(time.perf_counter() - t0) * 1000,
            details=details,
            failures=failures,
        )
        log = logger.info if result.passed else logger.warning
        log(f"verify {result.id}: {'pass' if result.passed else 'FAIL'} in {result.wall_time_ms:.0f} ms")
        if audit is not None:
            audit.log_check(report.run_id, result.id, result.passed, {"failures": failures, "wall_time_ms": result.wall_time_ms})
        report.results.append(result)
    report.total_time_ms = (time.perf_counter() - started) * 1000
    return report
