import math
import time
import warnings

import numpy as np
import pytest

from deform import (
    DeformationParams,
    SweepRow,
    binary_entropy,
    combine_integrand,
    combined_chsh,
    deformed_argmax,
    deformed_sum,
    idempotent_combined_chsh,
    midpoint_chsh,
    omega,
    solve_xmax,
    sweep_T,
    tsirelson_gap,
)
from errors import BracketError, DomainError, NumericError, ValidationError
from semiring import ModelLabel, label_add

XMAX_REFERENCE = 2.82355
GRID = [2.0, 2.5, 3.0, 3.5, 4.0]


@pytest.fixture(scope="module")
def entropy_constant() -> float:
    # C = int_0^1 exp(S(a)) da, средние точки, 10^7 узлов
    n, chunk, total = 10_000_000, 1_000_000, 0.0
    for start in range(0, n, chunk):
        a = (np.arange(start, start + chunk) + 0.5) / n
        total += float(np.sum(np.exp(-a * np.log(a) - (1 - a) * np.log1p(-a))))
    return total / n


class TestEntropy:
    def test_half(self):
        assert binary_entropy(0.5) == pytest.approx(math.log(2), abs=1e-15)

    def test_endpoints(self):
        assert binary_entropy(0.0) == 0.0
        assert binary_entropy(1.0) == 0.0

    def test_symmetry(self):
        a = np.linspace(0.0, 1.0, 1000)
        assert np.max(np.abs(binary_entropy(a) - binary_entropy(1.0 - a))) <= 1e-15

    def test_domain(self):
        with pytest.raises(DomainError):
            binary_entropy(1.2)


class TestOmega:
    def test_values(self):
        assert omega(0.5, 1.0) == pytest.approx(2.0, abs=1e-14)
        assert omega(0.5, 2.0) == pytest.approx(4.0, abs=1e-14)

    def test_endpoint_extension(self):
        assert omega(0.0, 1.0) == 0.0
        assert omega(1.0, 3.0) == 0.0
        assert omega(0.0, 1.0, endpoint_weight=1.0) == 1.0

    def test_product_form(self):
        for a in np.linspace(0.05, 0.95, 19):
            for T in (0.5, 1.0, 2.0):
                assert omega(a, T) == pytest.approx(a ** (-T * a) * (1 - a) ** (-T * (1 - a)), rel=1e-13)

    def test_rejects_T(self):
        with pytest.raises(DomainError):
            omega(0.5, 0.0)


class TestCombineIntegrand:
    def test_center(self):
        assert combine_integrand(0.5, 2.0, 2.0, 1.0) == pytest.approx(4.0, abs=1e-14)

    def test_left_limit(self):
        assert combine_integrand(1e-12, 3.0, 2.0, 1.0) == pytest.approx(3.0, abs=1e-9)

    def test_symmetry(self):
        for a in np.linspace(0.01, 0.99, 50):
            assert combine_integrand(a, 3.3, 2.0, 1.0) == pytest.approx(
                combine_integrand(1 - a, 2.0, 3.3, 1.0), rel=1e-13
            )

    def test_domain(self):
        with pytest.raises(ValidationError):
            combine_integrand(0.5, 4.5, 2.0, 1.0)


class TestCombinedChsh:
    def test_root_of_bound_equation(self):
        assert combined_chsh(2.0, XMAX_REFERENCE).Z == pytest.approx(4.0, abs=2e-4)

    def test_reference_values(self):
        assert combined_chsh(2.0, 2.0).Z == pytest.approx(3.35241831, abs=1e-7)
        assert combined_chsh(2.0, 4.0).Z == pytest.approx(4.82178195, abs=1e-7)
        assert combined_chsh(2.0, 3.0).Z == pytest.approx(4.12969839, abs=1e-7)

    @pytest.mark.slow
    def test_equal_summands(self, entropy_constant):
        assert combined_chsh(2.0, 2.0).Z == pytest.approx(2 * entropy_constant, abs=1e-9)

    def test_symmetry(self):
        for X in GRID:
            for Y in GRID:
                assert abs(combined_chsh(Y, X).Z - combined_chsh(X, Y).Z) <= 1e-12

    def test_strictly_increasing(self):
        values = [combined_chsh(2.0, X).Z for X in np.linspace(2.0, 4.0, 81)]
        assert all(b > a for a, b in zip(values, values[1:]))

    @pytest.mark.parametrize("order", [64, 128, 256])
    def test_convergence(self, order):
        params = DeformationParams(quad_order=order)
        for X in GRID:
            for Y in GRID:
                result = combined_chsh(Y, X, params)
                assert result.abs_error_estimate <= 1e-8
                assert result.n_evals == 3 * order

    def test_result_fields(self):
        result = combined_chsh(2.0, 3.0)
        assert result.Z > 0
        assert result.abs_error_estimate >= 0

    def test_endpoint_insensitive(self):
        for X in GRID:
            zero = combined_chsh(2.0, X, DeformationParams(endpoint_weight=0.0))
            one = combined_chsh(2.0, X, DeformationParams(endpoint_weight=1.0))
            assert abs(zero.Z - one.Z) <= max(zero.abs_error_estimate, 1e-15)

    def test_overflow_is_numeric_error(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            with pytest.raises(NumericError):
                combined_chsh(2.0, 3.0, DeformationParams(T=2000.0))
            with pytest.raises(NumericError):
                idempotent_combined_chsh(2.0, 3.0, 2000.0, grid=1001)
            with pytest.raises(NumericError):
                deformed_sum(2.0, 3.0, 2000.0)

    @pytest.mark.slow
    def test_midpoint_oracle(self):
        for X in GRID:
            for Y in GRID:
                assert combined_chsh(Y, X).Z == pytest.approx(midpoint_chsh(Y, X, 1.0), abs=1e-6)


class TestSolve:
    def test_xmax_reproduction(self):
        start = time.perf_counter()
        result = solve_xmax(DeformationParams(T=1.0, target=4.0))
        elapsed = time.perf_counter() - start
        assert result.x_max == pytest.approx(XMAX_REFERENCE, abs=1e-4)
        assert result.gap_to_tsirelson == pytest.approx(0.0017, abs=0.0002)
        assert abs(result.residual) <= 1e-8
        assert result.bracket[0] <= result.x_max <= result.bracket[1]
        assert elapsed < 1.0

    def test_reference_root(self):
        # независимый оракул (средние точки): X_max = 2.8235460
        assert solve_xmax().x_max == pytest.approx(2.8235460, abs=1e-6)

    @pytest.mark.parametrize("x", [2.2, 2.8, 3.0, 3.5])
    def test_round_trip(self, x):
        params = DeformationParams()
        target = combined_chsh(2.0, x, params).Z
        result = solve_xmax(DeformationParams(target=target))
        assert result.x_max == pytest.approx(x, abs=1e-7)

    def test_unreachable_target(self):
        with pytest.raises(BracketError):
            solve_xmax(DeformationParams(target=3.0))
        with pytest.raises(BracketError):
            solve_xmax(DeformationParams(T=0.5))

    def test_params_validation(self):
        with pytest.raises(ValidationError):
            DeformationParams(T=-1.0)
        with pytest.raises(ValidationError):
            DeformationParams(quad_order=4)
        with pytest.raises(ValidationError):
            DeformationParams(root_tol=0.0)


class TestTsirelsonGap:
    def test_values(self):
        assert tsirelson_gap(2 * math.sqrt(2)) == pytest.approx(0.0, abs=1e-15)
        assert tsirelson_gap(XMAX_REFERENCE) == pytest.approx(0.001726, abs=1e-6)
        assert tsirelson_gap(2.0) == pytest.approx(1 - 1 / math.sqrt(2), abs=1e-12)


class TestSweep:
    def test_single_row(self):
        rows = sweep_T([1.0])
        assert len(rows) == 1
        assert rows[0].x_max == solve_xmax().x_max
        assert rows[0].x_max == pytest.approx(XMAX_REFERENCE, abs=1e-4)

    def test_decreasing_in_T(self):
        # оракул на мелкой сетке: 3.4437, 3.1215, 2.8235, 2.5487, 2.2958
        Ts = [0.8, 0.9, 1.0, 1.1, 1.2]
        rows = sweep_T(Ts)
        assert [row.T for row in rows] == Ts
        xs = [row.x_max for row in rows]
        assert xs == pytest.approx([3.443684, 3.121480, 2.823546, 2.548716, 2.295813], abs=1e-5)
        assert all(b < a for a, b in zip(xs, xs[1:]))

    def test_errors_reported_in_row(self):
        rows = sweep_T([0.5, 1.0, 2.0])
        assert rows[0].x_max is None and "outside" in rows[0].error
        assert rows[1].error is None
        assert rows[2].x_max is None and rows[2].error

    def test_deterministic_and_serial_equivalent(self):
        Ts = [0.9, 1.0, 1.1]
        serial = [SweepRow(T, solve_xmax(DeformationParams(T=T)).x_max) for T in Ts]
        assert sweep_T(Ts, workers=1) == sweep_T(Ts, workers=3)
        assert [row.x_max for row in sweep_T(Ts)] == [row.x_max for row in serial]


class TestIdempotentLayer:
    def test_equal_summands(self):
        assert idempotent_combined_chsh(2.0, 2.0, 1.0) == pytest.approx(4.0, abs=1e-9)
        # sup-чтение расходится с обычным интегралом
        assert combined_chsh(2.0, 2.0).Z < 4.0

    def test_closed_form(self):
        for X in GRID:
            for Y in GRID:
                for T in (0.5, 1.0, 2.0):
                    sup = idempotent_combined_chsh(Y, X, T, grid=200_001)
                    assert sup == pytest.approx(deformed_sum(Y, X, T), rel=1e-9)

    def test_stationary_point(self):
        X = XMAX_REFERENCE
        a_star = deformed_argmax(2.0, X, 1.0)
        assert a_star == pytest.approx(2.0 / (2.0 + X), abs=1e-14)
        # производная log-подынтегрального выражения обращается в ноль
        h = 1e-6
        log_f = lambda a: math.log(combine_integrand(a, X, 2.0, 1.0))
        assert (log_f(a_star + h) - log_f(a_star - h)) / (2 * h) == pytest.approx(0.0, abs=1e-8)
        assert idempotent_combined_chsh(2.0, X, 1.0) == pytest.approx(combine_integrand(a_star, X, 2.0, 1.0), abs=1e-9)

    def test_sup_dominates_center(self):
        assert idempotent_combined_chsh(2.0, 3.0, 1.0) >= combine_integrand(0.5, 3.0, 2.0, 1.0)

    def test_sum_at_unit_T(self):
        assert deformed_sum(2.0, XMAX_REFERENCE, 1.0) == pytest.approx(2.0 + XMAX_REFERENCE, abs=1e-12)

    def test_dequantization_limit(self):
        # при T -> 0 деформированная сумма превращается в идемпотентную
        for X, Y in [(2.0, 3.0), (3.7, 2.4), (2.5, 2.5)]:
            label = label_add(ModelLabel(Y), ModelLabel(X))
            gaps = [deformed_sum(Y, X, T) - label.value for T in (0.5, 0.1, 0.01, 0.001)]
            assert all(g >= 0 for g in gaps)
            assert gaps == sorted(gaps, reverse=True)
            assert gaps[-1] < 1e-2
