"""Run orchestration: verification suites, subcommand pipelines and report files.

Every task draws from its own generator keyed by (seed, stream, n, index), so runs
are reproducible regardless of worker count and records can be merged by sorting.
"""

from __future__ import annotations

import logging
import math
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from qboolean import formats
from qboolean.exceptions import ValidationError
from qboolean.models import (
    EnsembleSpec,
    Family,
    InequalityReport,
    RunConfig,
    SemigroupCheckReport,
)
from qboolean.services import ensembles, inequalities, junta, learn, semigroup, weighted
from qboolean.services.influence import profile
from qboolean.services.pauli_core import (
    Operator,
    ensure_dense,
    ensure_fourier,
    inner,
    is_balanced,
    is_quantum_boolean,
    normalized_trace,
    schatten_norm,
    support_of,
    to_dense,
    to_fourier,
    variance,
)
from qboolean.utils.helpers import instance_rng, operator_norm

logger = logging.getLogger(__name__)

Record = dict[str, Any]
SuiteFn = Callable[[RunConfig, int, int, np.random.Generator], list[Record]]

DEFAULT_T_GRID = (0.01, 0.1, 0.5, 1.0, 2.0)
DEFAULT_EPS_GRID = (0.25, 0.5, 1.0, 2.0)
WEIGHTED_DIAGONALS = (0.5, 0.7, 0.9)
AUX_KKL_POINTS = 100
AUX_KKL_MAX_LENGTH = 64
AUX_KKL_MAX_DRAWS = 50 * AUX_KKL_POINTS
DIRICHLET_TOL = 1e-10
BOOLEAN_SQUARE_TOL = 1e-10

SUITES: dict[str, SuiteFn] = {}
SUITE_QUBITS: dict[str, tuple[int, int | None]] = {}
SUMMARIES: dict[str, Callable[[RunConfig, list[Record]], list[Record]]] = {}


def suite(name: str, min_qubits: int = 1, max_qubits: int | None = None) -> Callable[[SuiteFn], SuiteFn]:
    """Register a verification suite run once per (n, index) task."""
    def register(fn: SuiteFn) -> SuiteFn:
        SUITES[name] = fn
        SUITE_QUBITS[name] = (min_qubits, max_qubits)
        return fn
    return register


def stream(name: str) -> int:
    """Stable generator key for a named stream."""
    return zlib.crc32(name.encode())


# Record builders

def report_row(report: InequalityReport | SemigroupCheckReport) -> Record:
    """Flatten a service report into a record."""
    if isinstance(report, InequalityReport):
        return {
            'name': report.name,
            'lhs': report.lhs,
            'rhs': report.rhs_without_constant,
            'implied_constant': report.implied_constant,
            'asserted': report.asserted,
            'satisfied': report.satisfied,
            'values': report.values,
            'metadata': report.metadata,
        }
    return {
        'name': report.name,
        't': report.t,
        'lhs': report.lhs,
        'rhs': report.rhs,
        'slack': report.slack,
        'asserted': True,
        'satisfied': report.satisfied,
        'metadata': report.metadata,
    }


def assertion(name: str, lhs: float, rhs: float, satisfied: bool, **values: Any) -> Record:
    return {
        'name': name, 'lhs': float(lhs), 'rhs': float(rhs),
        'asserted': True, 'satisfied': bool(satisfied), 'values': values,
    }


def observation(name: str, lhs: float, rhs: float | None = None, **values: Any) -> Record:
    """Report-only record; never fails a run."""
    implied = None
    if rhs is not None:
        implied = float(lhs) / rhs if rhs > 0 else math.inf
    return {
        'name': name, 'lhs': float(lhs), 'rhs': rhs, 'implied_constant': implied,
        'asserted': False, 'satisfied': True, 'values': values,
    }


def _sort_key(row: Record) -> tuple:
    def number(value: Any) -> float:
        return -1.0 if value is None else float(value)
    return (
        str(row.get('suite', '')), str(row['name']),
        number(row.get('n')), number(row.get('index')), number(row.get('t')),
        formats.dumps(row),
    )


def _fan_out(config: RunConfig, fn: Callable[..., list[Record]], tasks: Sequence[tuple]) -> list[Record]:
    if config.workers == 1:
        chunks = [fn(*task) for task in tasks]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(lambda task: fn(*task), tasks))
    return [row for chunk in chunks for row in chunk]


def _grid(config: RunConfig, key: str, default: Sequence[float]) -> list[float]:
    return [float(value) for value in config.options.get(key, default)]


# Instance generators

def _structured_qbf(n: int, index: int) -> Operator | None:
    if index == 0:
        return ensembles.classical_embed(ensembles.dictator(n))
    if index == 1:
        return ensembles.classical_embed(ensembles.parity(n))
    if index == 2 and n % 2 == 1:
        return ensembles.classical_embed(ensembles.majority(n))
    return None


def _balanced_qbf(n: int, index: int, rng: np.random.Generator) -> Operator:
    structured = _structured_qbf(n, index)
    return structured if structured is not None else ensembles.random_qbf(n, 2 ** (n - 1), rng)


def _qbf(n: int, index: int, rng: np.random.Generator) -> Operator:
    structured = _structured_qbf(n, index)
    if structured is not None:
        return structured
    return ensembles.random_qbf(n, int(rng.integers(0, 2 ** n + 1)), rng)


def _mixed(n: int, index: int, rng: np.random.Generator) -> Operator:
    """Random Hermitian operators at even indices, random QBFs at odd ones."""
    if index % 2 == 0:
        return ensembles.random_hermitian(n, rng)
    return ensembles.random_qbf(n, int(rng.integers(0, 2 ** n + 1)), rng)


# Verification suites

@suite('roundtrip')
def _roundtrip(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = ensembles.random_matrix(n, rng)
    error = float(np.max(np.abs(to_dense(to_fourier(A)).matrix - A.matrix)))
    return [assertion('roundtrip', error, config.tolerances.roundtrip, error <= config.tolerances.roundtrip)]


@suite('parseval')
def _parseval(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = ensembles.random_hermitian(n, rng) if index % 2 == 0 else ensembles.random_matrix(n, rng)
    F = to_fourier(A)
    norm_sq = schatten_norm(A, 2).value ** 2
    split = variance(F) + abs(normalized_trace(F)) ** 2
    parseval_residual = abs(split - norm_sq)
    energy = inner(F, semigroup.generator(F)).real
    dirichlet_residual = abs(profile(F).total2 - energy)
    scale = max(1.0, norm_sq)
    return [
        assertion('parseval', split, norm_sq, parseval_residual <= config.tolerances.roundtrip * scale,
                  residual=parseval_residual),
        assertion('dirichlet', profile(F).total2, energy, dirichlet_residual <= DIRICHLET_TOL * scale,
                  residual=dirichlet_residual),
    ]


@suite('poincare')
def _poincare(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = _mixed(n, index, rng)
    tol = config.tolerances.psd
    return [report_row(inequalities.poincare_l1(A, tol)), report_row(inequalities.poincare_l2(A, tol))]


@suite('strong_poincare')
def _strong_poincare(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    return [report_row(inequalities.strong_poincare_l1(_mixed(n, index, rng), config.tolerances.psd))]


@suite('semigroup')
def _semigroup(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = _mixed(n, index, rng)
    tol = config.tolerances.psd
    rows = []
    for t in _grid(config, 't_grid', DEFAULT_T_GRID):
        reports = [
            semigroup.check_hypercontractivity(A, t, tol),
            semigroup.check_gradient_estimate(A, t, tol),
            semigroup.check_djPt_bound(A, t, tol),
            semigroup.check_intertwining(A, t, index % n),
            semigroup.check_intertwining(A, t, index % n, dense=True, tol=config.tolerances.roundtrip),
            semigroup.check_smoothing(A, t, tol),
            semigroup.check_poincare_contraction(A, t, tol),
        ]
        rows.extend(report_row(report) for report in reports)
    return rows


@suite('carre_du_champ')
def _carre_du_champ(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = ensembles.random_matrix(n, rng) if index % 2 == 0 else ensembles.random_hermitian(n, rng)
    return [report_row(semigroup.check_gradient_domination(A, config.tolerances.psd))]


@suite('friedgut')
def _friedgut(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = _qbf(n, index, rng)
    rows = []
    for eps in _grid(config, 'eps_grid', DEFAULT_EPS_GRID):
        result = junta.friedgut_extract(A, eps, config.tolerances.support)
        rows.append(assertion(
            'friedgut', result.error_l2, eps, result.certified,
            eps=eps, k_actual=result.k_actual, k_bound=result.k_bound, eta=result.eta, t=result.t,
        ))
        if math.isfinite(result.eta) and math.isfinite(result.t) and result.t > 0:
            lemma = junta.check_partial_average_lemma(A, result.t, result.eta, config.tolerances.psd)
            rows.append(report_row(lemma.with_metadata(eps=eps)))
        rounded = junta.boolean_junta(A, eps, config.tolerances.qbf)
        square_ok = bool(is_quantum_boolean(rounded.junta, BOOLEAN_SQUARE_TOL))
        rows.append(assertion(
            'boolean_junta', rounded.error_l2, eps, rounded.certified and square_ok,
            eps=eps, k_actual=rounded.extraction.k_actual, k_bound=rounded.k_bound, squares_to_identity=square_ok,
        ))
    return rows


@suite('talagrand')
def _talagrand(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = _balanced_qbf(n, index, rng)
    tol = config.tolerances.psd
    c_emp = config.calibration.c_emp
    pinned = inequalities.talagrand_l1(A, tol, constant=c_emp)
    if pinned.implied_constant > c_emp:
        logger.warning('Talagrand implied constant %.6g above pinned C_emp=%.6g (n=%d, index=%d)',
                       pinned.implied_constant, c_emp, n, index)
    return [
        report_row(pinned.with_metadata(c_emp=c_emp, provenance=config.calibration.c_emp_provenance)),
        report_row(inequalities.talagrand_l1l2(A, 'norm', tol)),
        report_row(inequalities.talagrand_l1l2(A, 'squared', tol)),
    ]


@suite('kkl', min_qubits=2)
def _kkl(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    A = _balanced_qbf(n, index, rng)
    l2 = inequalities.kkl_max_influence(A, p=2, tol=config.tolerances.qbf)
    logger.debug('L2 KKL observation n=%d index=%d implied=%.6g', n, index, l2.implied_constant)
    return [report_row(inequalities.kkl_max_influence(A, p=1, tol=config.tolerances.qbf)), report_row(l2)]


@suite('aux_kkl')
def _aux_kkl(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    """AUX_KKL_POINTS grid points that meet the hypothesis, with sequence lengths in 2..64.

    Length 1 is excluded: its bound is 0 and every point holds trivially.
    """
    held = failures = draws = 0
    while held < AUX_KKL_POINTS and draws < AUX_KKL_MAX_DRAWS:
        draws += 1
        length = int(rng.integers(2, AUX_KKL_MAX_LENGTH + 1))
        a = 10.0 ** rng.uniform(-6.0, 0.3, size=length)
        c = 10.0 ** rng.uniform(-2.0, 0.5)
        outcome = inequalities.lemma_aux_kkl(a, c)
        if outcome is None:
            continue
        held += 1
        failures += not outcome
    satisfied = failures == 0 and held == AUX_KKL_POINTS
    return [assertion('aux_kkl', failures, 0, satisfied, hypothesis_held=held, draws=draws)]


@suite('integral')
def _integral(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    alpha = 10.0 ** rng.uniform(-1.0, 0.5)
    a = 10.0 ** rng.uniform(-6.0, 1.0)
    r = rng.uniform(0.0, min(1.0, 1.0 / (2 * alpha)))
    return [report_row(inequalities.integral_lemma_check(alpha, a, r, config.tolerances.psd))]


@suite('isoperimetry')
def _isoperimetry(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    P = ensembles.random_projector(n, int(rng.integers(0, 2 ** n + 1)), rng)
    tol = config.tolerances.qbf
    return [
        report_row(inequalities.isoperimetry_check(P, 'l1', tol)),
        report_row(inequalities.isoperimetry_check(P, 'l2', tol)),
    ]


def _learn_row(name: str, report, tol: float) -> Record:
    params = report.params
    verified = params['guarantee_listed_relevant'] and params['tail_bound_holds']
    row = assertion(
        name, report.l2_error, params['error_bound'], not report.success or verified,
        success=report.success, queries=report.queries_used,
    )
    row['values']['report'] = report.to_dict(tol)
    return row


@suite('goldreich_levin', min_qubits=2)
def _goldreich_levin(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    hidden = ensembles.random_junta_qbf(n, 2, rng)
    oracle = learn.QueryOracle(hidden, rng, config.tolerances.qbf)
    report = learn.learn_qbf(
        oracle,
        eps=float(config.options.get('eps', 0.5)),
        delta=float(config.options.get('delta', 0.1)),
        k_hint=2,
        gamma=float(config.options.get('gamma', 0.3)),
    )
    return [_learn_row('goldreich_levin', report, config.tolerances.support)]


@suite('low_degree')
def _low_degree(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    d = int(config.options.get('degree', 2))
    if d not in ensembles.BOOLEAN_DEGREES:
        logger.warning('Skipping low_degree task n=%d index=%d: hidden Boolean draws support degrees %s, got %d',
                       n, index, ensembles.BOOLEAN_DEGREES, d)
        return []
    eps = float(config.options.get('low_degree_eps', 0.2))
    delta = float(config.options.get('delta', 0.1))
    cd = config.calibration.cd_for(d)
    hidden = ensembles.random_low_degree_boolean(n, d, rng)
    oracle = learn.QueryOracle(hidden, rng, config.tolerances.qbf)
    report = learn.low_degree_learn(oracle, d, eps, delta, cd)
    expected = learn.low_degree_sample_size(n, d, eps, delta, cd) * report.params['strings']
    squared = report.l2_error ** 2
    row = observation('low_degree', squared, eps, success=report.success, queries=report.queries_used, C_d=cd)
    return [row, assertion('low_degree_queries', report.queries_used, expected, report.queries_used == expected)]


@suite('bh')
def _bh(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    rows = []
    for d in (1, 2, 3):
        F = ensembles.random_low_degree(n, d, rng, diagonal=index % 2 == 1)
        ratio = learn.bh_ratio(F, d)
        pinned = config.calibration.c_d.get(d)
        if pinned is not None and ratio > pinned:
            logger.warning('BH ratio %.6g above pinned C_%d=%.6g (n=%d)', ratio, d, pinned, n)
        rows.append(observation('bh', ratio, pinned, d=d, provenance=config.calibration.c_d_provenance))
    return rows


@suite('weighted', max_qubits=3)
def _weighted(config: RunConfig, n: int, index: int, rng: np.random.Generator) -> list[Record]:
    q = WEIGHTED_DIAGONALS[index % len(WEIGHTED_DIAGONALS)]
    ctx = weighted.WeightedContext.from_diagonal(q, n)
    x = ensembles.random_matrix(n, rng)
    rows = [
        report_row(weighted.general_poincare_l1(ctx, x, tol=config.tolerances.psd).with_metadata(omega=q)),
        report_row(weighted.general_talagrand_l1(ctx, x, tol=config.tolerances.psd).with_metadata(omega=q)),
    ]
    if q == 0.5:
        for p in (1.0, 1.5, 2.0, 4.0):
            kms = weighted.kms_norm(ctx, x, p)
            tracial = schatten_norm(x, p).value
            rows.append(assertion('tracial_reduction', kms, tracial, abs(kms - tracial) <= 1e-12 * max(1.0, tracial), p=p))
    if index < len(WEIGHTED_DIAGONALS):
        rows.extend(_axiom_rows(weighted.verify_axioms(ctx, seed=config.seed), q))
    return rows


def _axiom_rows(axioms: weighted.AxiomReport, q: float | None) -> list[Record]:
    rows = [report_row(check.with_metadata(omega=q)) for check in axioms.checks]
    rows.append(observation(
        'hypercontractivity_alpha', axioms.hypercontractivity_alpha,
        spectral_gap=axioms.spectral_gap, condition_number=axioms.condition_number, omega=q,
    ))
    return rows


def _success_summary(name: str) -> Callable[[RunConfig, list[Record]], list[Record]]:
    """Success fraction against 1 - δ less three binomial standard deviations."""
    def summarize(config: RunConfig, rows: list[Record]) -> list[Record]:
        runs = [row for row in rows if row['name'] == name]
        if not runs:
            return []
        delta = float(config.options.get('delta', 0.1))
        fraction = sum(bool(row['values']['success']) for row in runs) / len(runs)
        target = 1 - delta - 3 * math.sqrt(delta * (1 - delta) / len(runs))
        row = assertion(f'{name}_success_rate', fraction, target, fraction >= target, trials=len(runs), delta=delta)
        return [{**row, 'suite': name, 'seed': config.seed}]
    return summarize


SUMMARIES['goldreich_levin'] = _success_summary('goldreich_levin')
SUMMARIES['low_degree'] = _success_summary('low_degree')


def run_suite(config: RunConfig, name: str) -> list[Record]:
    """Run one verification suite over the configured qubit range and trials.

    Raises:
        ValidationError: On an unknown suite
    """
    if name not in SUITES:
        raise ValidationError(f"Unknown suite '{name}'; choose from {', '.join(sorted(SUITES))} or all.")
    fn = SUITES[name]
    low, high = SUITE_QUBITS[name]
    key = stream(name)
    tasks = [
        (n, index)
        for n in config.n_range
        if n >= low and (high is None or n <= high)
        for index in range(config.trials)
    ]

    def task(n: int, index: int) -> list[Record]:
        rng = instance_rng(config.seed, key, n, index)
        context = {'suite': name, 'n': n, 'seed': config.seed, 'index': index}
        return [{**row, **context} for row in fn(config, n, index, rng)]

    rows = _fan_out(config, task, tasks)
    logger.info('Suite %s: %d tasks, %d records', name, len(tasks), len(rows))
    if name in SUMMARIES:
        rows.extend(SUMMARIES[name](config, rows))
    return rows


# Subcommand pipelines

def _verify(config: RunConfig) -> list[Record]:
    name = config.options.get('suite', 'all')
    names = sorted(SUITES) if name == 'all' else [name]
    return [row for suite_name in names for row in run_suite(config, suite_name)]


def _is_projector(A: Operator, tol: float) -> bool:
    matrix = ensure_dense(A).matrix
    return operator_norm(matrix - matrix.conj().T) <= tol and operator_norm(matrix @ matrix - matrix) <= tol


def _analyze(config: RunConfig) -> list[Record]:
    F = formats.load_operator(config.options['input'])
    tol = config.tolerances
    prof = profile(F, tol.support)
    check = is_quantum_boolean(F, tol.qbf)
    balanced = is_balanced(F, tol.qbf)
    support = sorted(support_of(F, tol.support))
    norms = {str(p): schatten_norm(F, p).value for p in (1, 2, math.inf)}
    rows = [
        observation('profile', prof.total1, None, **prof.to_dict()),
        observation('variance', variance(F)),
        observation('norms', norms['2'], None, **norms),
        observation(
            'quantum_boolean', check.square_residual, None,
            is_quantum_boolean=check.is_boolean, hermitian_residual=check.hermitian_residual, balanced=balanced,
        ),
        observation('support', len(support), None, support=support),
        report_row(inequalities.poincare_l1(F, tol.psd)),
        report_row(inequalities.poincare_l2(F, tol.psd)),
        report_row(inequalities.strong_poincare_l1(F, tol.psd)),
        report_row(inequalities.talagrand_l1(F, tol.psd)),
        report_row(inequalities.talagrand_l1l2(F, 'norm', tol.psd)),
    ]
    if check and balanced:
        rows.append(report_row(inequalities.kkl_max_influence(F, p=1, tol=tol.qbf)))
        rows.append(report_row(inequalities.kkl_max_influence(F, p=2, tol=tol.qbf)))
    if _is_projector(F, tol.qbf):
        rows.append(report_row(inequalities.isoperimetry_check(F, 'l1', tol.qbf)))
        rows.append(report_row(inequalities.isoperimetry_check(F, 'l2', tol.qbf)))
    return [{**row, 'n': F.n, 'seed': config.seed, 'index': 0} for row in rows]


def _junta(config: RunConfig) -> list[Record]:
    F = formats.load_operator(config.options['input'])
    eps = float(config.options['eps'])
    out = Path(config.out_dir)
    result = junta.friedgut_extract(F, eps, config.tolerances.support)
    formats.save_operator(out / 'junta_operator.json', result.junta, config.tolerances.support)
    extraction = result.to_dict(config.tolerances.support)
    extraction.pop('junta')
    rows = [assertion('friedgut', result.error_l2, eps, result.certified, **extraction)]
    if config.options.get('boolean'):
        rounded = junta.boolean_junta(F, eps, config.tolerances.qbf)
        formats.save_operator(out / 'boolean_junta_operator.json', to_fourier(rounded.junta), config.tolerances.support)
        rows.append(assertion(
            'boolean_junta', rounded.error_l2, eps, rounded.certified,
            k_bound=rounded.k_bound, kept=sorted(rounded.extraction.kept),
        ))
    return [{**row, 'n': F.n, 'seed': config.seed, 'index': 0} for row in rows]


def _learn(config: RunConfig) -> list[Record]:
    options = config.options
    F = formats.load_operator(options['hidden'])
    delta = float(options.get('delta', 0.1))
    eps = float(options.get('eps', 0.5))
    degree = options.get('degree')
    tol = config.tolerances
    key = stream('learn')
    rows = []
    for index in range(max(1, config.trials)):
        rng = instance_rng(config.seed, key, F.n, index)
        if degree is None:
            oracle = learn.QueryOracle(F, rng, tol.qbf)
            gamma = options.get('gamma')
            report = learn.learn_qbf(
                oracle, eps, delta, int(options.get('k_hint', 2)), None if gamma is None else float(gamma),
            )
            row = _learn_row('learn_qbf', report, tol.support)
        else:
            d = int(degree)
            cd = float(options['cd']) if options.get('cd') is not None else config.calibration.cd_for(d)
            oracle = learn.QueryOracle(F, rng, tol.qbf, require_boolean=False)
            report = learn.low_degree_learn(oracle, d, eps, delta, cd)
            row = observation(
                'low_degree', report.l2_error ** 2, eps,
                success=report.success, queries=report.queries_used, report=report.to_dict(tol.support),
            )
        rows.append({**row, 'n': F.n, 'seed': config.seed, 'index': index})
    return rows


def _ensemble(config: RunConfig) -> list[Record]:
    options = config.options
    family = Family(options['family'])
    count = int(options.get('count', config.trials))
    target = Path(config.out_dir) / 'ensemble'
    rows = []
    for n in config.n_range:
        spec = EnsembleSpec(family, n, config.seed, dict(options.get('params', {})))
        formats.write_json(target / f'{family.value}_n{n}_spec.json', spec.to_dict())
        for index, operator in enumerate(ensembles.sample(spec, count)):
            F = ensure_fourier(operator)
            path = formats.save_operator(target / f'{family.value}_n{n}_{index:04d}.json', F)
            prof = profile(F, config.tolerances.support)
            rows.append({
                **observation(
                    'ensemble', prof.total1, None,
                    file=path.name, total2=prof.total2, variance=variance(F),
                    quantum_boolean=bool(is_quantum_boolean(F, config.tolerances.qbf)),
                    balanced=is_balanced(F, config.tolerances.qbf),
                ),
                'n': n, 'seed': config.seed, 'index': index,
            })
    return rows


def _weighted_pipeline(config: RunConfig) -> list[Record]:
    options = config.options
    n = config.n_min
    ctx = weighted.WeightedContext(formats.parse_omega(options['omega']), n)
    axioms = weighted.verify_axioms(ctx, tol=float(options.get('tol', 1e-8)), seed=config.seed)
    rows = [{**row, 'index': 0} for row in _axiom_rows(axioms, options.get('q'))]
    key = stream('weighted')
    for index in range(config.trials):
        x = ensembles.random_matrix(n, instance_rng(config.seed, key, n, index))
        rows.append({**report_row(weighted.general_poincare_l1(ctx, x, tol=config.tolerances.psd)), 'index': index})
        rows.append({**report_row(weighted.general_talagrand_l1(ctx, x, tol=config.tolerances.psd)), 'index': index})
    return [{**row, 'n': n, 'seed': config.seed} for row in rows]


def _dynamics(config: RunConfig) -> list[Record]:
    options = config.options
    n = config.n_min
    t = float(options.get('time', 1.0))
    site = int(options.get('site', n // 2))
    chain = ensembles.heisenberg_chain(
        n, float(options.get('jx', 1.0)), float(options.get('jz', 1.0)), float(options.get('h', 0.5)),
    )
    A = ensembles.evolved_pauli(n, chain, t, site, int(options.get('pauli', 3)), config.tolerances.qbf)
    prof = profile(A, config.tolerances.support)
    rows = []
    for j in range(n):
        bound = ensembles.commutator_influence_bound(A, j, config.tolerances.psd)
        rows.append(observation('influence_decay', prof.inf1[j], None, qubit=j, distance=abs(j - site), inf2=prof.inf2[j]))
        rows.append(assertion('commutator_bound', bound.lhs, bound.rhs, bound.satisfied, qubit=j))
    return [{**row, 'n': n, 'seed': config.seed, 'index': 0, 't': t} for row in rows]


PIPELINES: dict[str, Callable[[RunConfig], list[Record]]] = {
    'analyze': _analyze,
    'dynamics': _dynamics,
    'ensemble': _ensemble,
    'junta': _junta,
    'learn': _learn,
    'verify': _verify,
    'weighted': _weighted_pipeline,
}


def run(config: RunConfig) -> int:
    """Execute the pipeline named by config.subcommand and write its report files.

    Writes `<out>/<subcommand>.jsonl|csv` sorted by (suite, name, n, index, t),
    `<out>/run_config.json` for replay and `<out>/run_meta.json` with timings.

    Args:
        config: Run configuration

    Returns:
        1 if any asserted check failed, else 0

    Raises:
        ValidationError: On an unknown subcommand or invalid options
        QBooleanError: On I/O failures
    """
    if config.subcommand not in PIPELINES:
        raise ValidationError(f"Unknown pipeline '{config.subcommand}'.")
    started = datetime.now(timezone.utc)
    clock = time.perf_counter()
    logger.info('Starting %s run (seed=%d, n=%d..%d, trials=%d)',
                config.subcommand, config.seed, config.n_min, config.n_max, config.trials)

    rows = sorted(PIPELINES[config.subcommand](config), key=_sort_key)

    out = Path(config.out_dir)
    report = formats.write_reports(rows, formats.report_path(out, config.subcommand, config.fmt), config.fmt)
    formats.write_json(out / 'run_config.json', config.to_dict())
    failures = [row for row in rows if row.get('asserted') and not row.get('satisfied')]
    for row in failures:
        logger.error('Asserted check failed: %s (n=%s, index=%s) lhs=%s rhs=%s',
                     row['name'], row.get('n'), row.get('index'), row.get('lhs'), row.get('rhs'))
    formats.write_json(out / 'run_meta.json', {
        'started': started.isoformat(),
        'finished': datetime.now(timezone.utc).isoformat(),
        'duration_seconds': time.perf_counter() - clock,
        'records': len(rows),
        'failures': len(failures),
        'report': report.name,
    })
    logger.info('Wrote %d records to %s (%d asserted failures)', len(rows), report, len(failures))
    return 1 if failures else 0
