import contextlib
import io
import json
import os
import tempfile
import unittest

import numpy as np

from cli import WaringLabCli
from constants import SCALAR_COMPLEX, SCALAR_PRIME, SCALAR_RATIONAL
from exceptions import EmptySystemError, FormatError, PreconditionError
from file_data_io import FileDataIO
from horace import CorollaryPipeline, HoraceCertifier
from interpolation import (
    CONFIDENCE_CERTIFICATE,
    STATUS_DEFICIENT,
    STATUS_EXPECTED,
    InterpolationSystem,
    ModularElimination
)
from job_runner import JobRunner, SeedStream
from multipoly import MultiPoly
from perfect_case_enumerator import PerfectCaseEnumerator
from point_config import PointSampler
from segre_format import SegreFormat
from tangency import TangencyAnalyzer
from tangency.helpers import COMPONENT_CURVE
from waring import DecompositionMatcher, RankOneModel, WaringDecomposer

P = 2147483647


class TestSegreFormat_Counts(unittest.TestCase):
    def test_1_perfect_k(self):
        """
        Test 1: Perfect cases of the plane quintic and of P^1 x P^1
        """
        unittest.TestCase.assertEqual(
            self, SegreFormat.perfect_k(SegreFormat.create([2], [5])), 6
            )
        unittest.TestCase.assertEqual(
            self, SegreFormat.perfect_k(SegreFormat.create([1, 1], [4, 5])), 9
            )
        unittest.TestCase.assertEqual(
            self, SegreFormat.perfect_k(SegreFormat.create([1, 1], [5, 5])), 11
            )
        unittest.TestCase.assertIsNone(
            self, SegreFormat.perfect_k(SegreFormat.create([1, 1], [4, 4]))
            )

    def test_2_parse_and_label(self):
        """
        Test 2: Format strings, degree normalization and malformed input
        """
        fmt = SegreFormat.parse("r=1,1;d=5,4")
        unittest.TestCase.assertEqual(self, fmt["d"], [4, 5])
        unittest.TestCase.assertEqual(self, fmt["original_d"], [5, 4])
        unittest.TestCase.assertEqual(self, SegreFormat.label(fmt), "r=1,1;d=4,5")
        unittest.TestCase.assertEqual(
            self, SegreFormat.parse("r=1,1;d=5,4", normalize=False)["d"], [5, 4]
            )
        for text in ("r=1;d=", "r=1,1;d=2", "x=1;d=2", "r=0;d=2"):
            with self.assertRaises(FormatError):
                SegreFormat.parse(text)

    def test_3_ncoeff_and_ambient(self):
        """
        Test 3: Coefficient counts and tensor dimension
        """
        fmt = SegreFormat.create([1, 1, 1], [3, 3, 14])
        unittest.TestCase.assertEqual(self, SegreFormat.ncoeff(fmt), 240)
        unittest.TestCase.assertEqual(
            self, SegreFormat.ambient_tensor_dim(SegreFormat.create([2], [2])), 8
            )

    def test_4_schedule(self):
        """
        Test 4: Degeneration schedule of (3,3,14) with 60 points
        """
        schedule = SegreFormat.weakly_schedule(
            SegreFormat.create([1, 1, 1], [3, 3, 14]), 60
            )
        unittest.TestCase.assertEqual(self, schedule["h0"], 5)
        unittest.TestCase.assertEqual(self, schedule["t0"], 11)
        unittest.TestCase.assertTrue(self, schedule["degree_ok"])
        first = SegreFormat.weakly_schedule(SegreFormat.create([1, 1, 1], [3, 3, 14]), 5)
        unittest.TestCase.assertEqual(self, first["t0"], 0)
        short = SegreFormat.weakly_schedule(SegreFormat.create([1, 1, 1], [3, 3, 12]), 51)
        unittest.TestCase.assertEqual(self, short["t0"], 10)
        unittest.TestCase.assertFalse(self, short["degree_ok"])

    def test_5_nef(self):
        """
        Test 5: Nef inequality
        """
        unittest.TestCase.assertTrue(
            self, SegreFormat.nef_check(SegreFormat.create([1, 1], [4, 5]))
            )
        unittest.TestCase.assertTrue(
            self, SegreFormat.nef_check(SegreFormat.create([1, 1], [5, 4], normalize=False))
            )
        with self.assertRaises(FormatError):
            SegreFormat.nef_check(SegreFormat.create([1, 2], [3, 3]))

    def test_6_degree_bound(self):
        """
        Test 6: Every degree at least r + 1
        """
        unittest.TestCase.assertTrue(
            self, SegreFormat.theorem_two_degree_bound(SegreFormat.create([2, 2], [3, 4]))
            )
        unittest.TestCase.assertFalse(
            self, SegreFormat.theorem_two_degree_bound(SegreFormat.create([2, 2], [2, 4]))
            )


class TestPerfectCaseEnumerator_Enumerate(unittest.TestCase):
    def test_1_corollary_two(self):
        """
        Test 1: Two-factor cases up to degree 5
        """
        cases = PerfectCaseEnumerator.enumerate_corollary_two(5)
        unittest.TestCase.assertEqual(
            self, [(c["format"]["d"], c["k"]) for c in cases], [([4, 5], 9), ([5, 5], 11)]
            )

    def test_2_corollary_three(self):
        """
        Test 2: The (3,3,14) case is listed with k = 59
        """
        cases = PerfectCaseEnumerator.enumerate_corollary_three(14)
        found = [c for c in cases if c["format"]["d"] == [3, 3, 14]]
        unittest.TestCase.assertEqual(self, len(found), 1)
        unittest.TestCase.assertEqual(self, found[0]["k"], 59)
        relaxed = PerfectCaseEnumerator.enumerate_corollary_three(
            14, require_assumption=False
            )
        unittest.TestCase.assertTrue(self, len(relaxed) >= len(cases))

    def test_3_theorem_one(self):
        """
        Test 3: Only the plane quintic is unique
        """
        cases = PerfectCaseEnumerator.enumerate_theorem_one(6)
        unique = [c for c in cases if c["nu_expected"] == "unique"]
        unittest.TestCase.assertEqual(self, len(unique), 1)
        unittest.TestCase.assertEqual(self, unique[0]["format"]["d"], [5])
        unittest.TestCase.assertEqual(self, unique[0]["k"], 6)

    def test_4_rows(self):
        """
        Test 4: Flattened rows
        """
        rows = PerfectCaseEnumerator.table_rows(
            PerfectCaseEnumerator.enumerate_corollary_two(5)
            )
        unittest.TestCase.assertEqual(self, rows[0]["d1"], 4)
        unittest.TestCase.assertEqual(self, rows[0]["ncoeff"], 30)
        unittest.TestCase.assertEqual(self, rows[0]["assumption1_ok"], "true")

    def test_5_exhaustive(self):
        """
        Test 5: Two- and three-factor lists match a direct search up to degree 30
        """
        two = [
            (d1, d2, SegreFormat.perfect_k(SegreFormat.create([1, 1], [d1, d2])))
            for d1 in range(4, 31) for d2 in range(d1, 31)
        ]
        unittest.TestCase.assertEqual(
            self,
            [(c["format"]["d"][0], c["format"]["d"][1], c["k"])
             for c in PerfectCaseEnumerator.enumerate_corollary_two(30)],
            [t for t in two if t[2] is not None]
            )
        three = []
        for d1 in range(3, 31):
            for d2 in range(d1, 31):
                for d3 in range(d2, 31):
                    k = SegreFormat.perfect_k(SegreFormat.create([1, 1, 1], [d1, d2, d3]))
                    if k is not None:
                        ok = k + 1 <= (d3 - 2) * ((d1 + 1) * (d2 + 1) // 3)
                        three.append((d1, d2, d3, k, ok))
        unittest.TestCase.assertEqual(
            self,
            [tuple(c["format"]["d"]) + (c["k"], c["assumption1_ok"])
             for c in PerfectCaseEnumerator.enumerate_corollary_three(
                 30, require_assumption=False
                 )],
            three
            )
        unittest.TestCase.assertEqual(
            self,
            len(PerfectCaseEnumerator.enumerate_corollary_three(30)),
            len([t for t in three if t[4]])
            )
        listed = [
            c["format"]["d"] for c in PerfectCaseEnumerator.enumerate_corollary_three(14)
        ]
        unittest.TestCase.assertNotIn(self, [3, 3, 13], listed)
        unittest.TestCase.assertEqual(
            self, PerfectCaseEnumerator.enumerate_corollary_three(3), []
            )


class TestMultiPoly_Expand(unittest.TestCase):
    def test_1_complex_evaluation(self):
        """
        Test 1: A rank-one expansion evaluates to the product of powers
        """
        fmt = SegreFormat.create([1, 2], [3, 2], normalize=False)
        rng = np.random.default_rng(7)
        for _ in range(20):
            linforms = [
                rng.standard_normal(r + 1) + 1j * rng.standard_normal(r + 1)
                for r in fmt["r"]
            ]
            section = MultiPoly.expand_rank_one(fmt, 0.5 - 1j, linforms)
            point = [
                list(rng.standard_normal(r) + 1j * rng.standard_normal(r))
                for r in fmt["r"]
            ]
            x = PointSampler.homogeneous(point, SCALAR_COMPLEX)
            expected = (0.5 - 1j) * np.prod([
                np.dot(l, xi) ** d for (l, xi, d) in zip(linforms, x, fmt["d"])
            ])
            value = MultiPoly.evaluate(section, point)
            unittest.TestCase.assertTrue(
                self, abs(value - expected) <= 1e-10 * max(1.0, abs(expected))
                )

    def test_2_prime_evaluation(self):
        """
        Test 2: The same identity modulo a prime
        """
        fmt = SegreFormat.create([2, 1], [2, 3], normalize=False)
        linforms = [[3, 5, 7], [11, 13]]
        section = MultiPoly.expand_rank_one(fmt, 2, linforms, SCALAR_PRIME, P)
        point = [[17, 19], [23]]
        x = PointSampler.homogeneous(point, SCALAR_PRIME)
        expected = 2
        for (l, xi, d) in zip(linforms, x, fmt["d"]):
            expected = expected * pow(sum(a * b for (a, b) in zip(l, xi)), d, P) % P
        unittest.TestCase.assertEqual(self, int(MultiPoly.evaluate(section, point)), expected)

    def test_3_wrong_length(self):
        """
        Test 3: Linear forms of the wrong length are rejected
        """
        with self.assertRaises(FormatError):
            MultiPoly.expand_rank_one(SegreFormat.create([2], [2]), 1, [[1, 2]])


    def test_4_basis_order(self):
        """
        Test 4: Monomials of one factor run from x0^d down to the last power
        """
        basis = MultiPoly.basis(SegreFormat.create([1], [2]))
        unittest.TestCase.assertEqual(
            self,
            [MultiPoly.monomial(basis, i) for i in range(basis["size"])],
            [[(2, 0)], [(1, 1)], [(0, 2)]]
            )
        basis = MultiPoly.basis(SegreFormat.create([1, 1], [1, 2], normalize=False))
        unittest.TestCase.assertEqual(self, MultiPoly.monomial(basis, 0), [(1, 0), (2, 0)])
        unittest.TestCase.assertEqual(self, MultiPoly.monomial(basis, 5), [(0, 1), (0, 2)])

    def test_5_partials_against_differences(self):
        """
        Test 5: Partial rows agree with central differences
        """
        fmt = SegreFormat.create([1, 2], [2, 3], normalize=False)
        rng = np.random.default_rng(11)
        size = SegreFormat.ncoeff(fmt)
        section = MultiPoly.section(
            fmt, rng.standard_normal(size) + 1j * rng.standard_normal(size)
            )
        point = [
            list(0.5 * rng.standard_normal(r) + 0.5j * rng.standard_normal(r))
            for r in fmt["r"]
        ]
        rows = MultiPoly.eval_partial_rows(MultiPoly.basis(fmt), point)
        gradient = rows @ section["coeffs"]
        step = 1e-6
        variables = [(i, j) for (i, r) in enumerate(fmt["r"]) for j in range(r)]
        for (v, (i, j)) in enumerate(variables):
            plus = [list(p) for p in point]
            minus = [list(p) for p in point]
            plus[i][j] += step
            minus[i][j] -= step
            difference = (
                MultiPoly.evaluate(section, plus) - MultiPoly.evaluate(section, minus)
                ) / (2 * step)
            unittest.TestCase.assertTrue(
                self,
                abs(gradient[v] - difference) <= 1e-6 * max(1.0, abs(gradient[v]))
                )


class TestModularElimination_Rank(unittest.TestCase):
    def test_1_rank_and_kernel(self):
        """
        Test 1: Rank and kernel of a small matrix over F_p
        """
        matrix = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]], dtype=np.int64)
        unittest.TestCase.assertEqual(self, ModularElimination.rank(matrix, P), 2)
        kernel = ModularElimination.nullspace(matrix, 3, P)
        unittest.TestCase.assertEqual(self, kernel.shape, (1, 3))
        product = [
            sum(int(a) * int(b) for (a, b) in zip(row, kernel[0])) % P
            for row in matrix
        ]
        unittest.TestCase.assertEqual(self, product, [0, 0, 0])


class TestInterpolationSystem_SecantDim(unittest.TestCase):
    def test_1_expected_controls(self):
        """
        Test 1: Non-defective secant varieties
        """
        for (r, d, k, rank) in (([2], [5], 6, 21), ([1, 1], [4, 5], 9, 30)):
            verdict = InterpolationSystem.secant_dim(SegreFormat.create(r, d), k)
            unittest.TestCase.assertEqual(self, verdict["status"], STATUS_EXPECTED)
            unittest.TestCase.assertEqual(self, verdict["rank"], rank)
            unittest.TestCase.assertEqual(self, verdict["confidence"], CONFIDENCE_CERTIFICATE)

    def test_2_defective_controls(self):
        """
        Test 2: Conics through two double points and quartics through five
        """
        verdict = InterpolationSystem.secant_dim(SegreFormat.create([2], [2]), 1)
        unittest.TestCase.assertEqual(self, verdict["status"], STATUS_DEFICIENT)
        unittest.TestCase.assertEqual(self, verdict["rank"], 5)
        unittest.TestCase.assertEqual(self, verdict["expected_dim"], 6)
        verdict = InterpolationSystem.secant_dim(SegreFormat.create([2], [4]), 4)
        unittest.TestCase.assertEqual(self, verdict["status"], STATUS_DEFICIENT)
        unittest.TestCase.assertEqual(self, verdict["rank"], 14)
        unittest.TestCase.assertEqual(self, verdict["trials"], 3)

    def test_3_scalar_kinds_agree(self):
        """
        Test 3: Rational and complex counts agree with the modular count
        """
        fmt = SegreFormat.create([2], [2])
        for kind in (SCALAR_RATIONAL, SCALAR_COMPLEX):
            verdict = InterpolationSystem.secant_dim(fmt, 1, kind=kind)
            unittest.TestCase.assertEqual(self, verdict["rank"], 5)

    def test_4_three_factors(self):
        """
        Test 4: (3,3,14) with 60 double points fills the ambient space
        """
        verdict = InterpolationSystem.secant_dim(
            SegreFormat.create([1, 1, 1], [3, 3, 14]), 59
            )
        unittest.TestCase.assertEqual(self, verdict["rank"], 240)
        unittest.TestCase.assertEqual(self, verdict["status"], STATUS_EXPECTED)

    def test_5_negative_k(self):
        """
        Test 5: k < 0 is rejected
        """
        with self.assertRaises(PreconditionError):
            InterpolationSystem.secant_dim(SegreFormat.create([2], [2]), -1)

    def test_6_seed_determinism(self):
        """
        Test 6: Identical seeds give identical verdicts
        """
        fmt = SegreFormat.create([1, 1], [2, 3])
        a = InterpolationSystem.secant_dim(fmt, 2, seed=11)
        b = InterpolationSystem.secant_dim(fmt, 2, seed=11)
        unittest.TestCase.assertEqual(self, a, b)


class TestInterpolationSystem_Sysdim(unittest.TestCase):
    def test_1_kernel_section(self):
        """
        Test 1: A kernel section satisfies every condition of its scheme
        """
        fmt = SegreFormat.create([1, 1], [3, 3])
        scheme = InterpolationSystem.random_scheme(
            fmt, 3, np.random.default_rng(3), SCALAR_PRIME, P
            )
        verdict = InterpolationSystem.sysdim(fmt, scheme)
        unittest.TestCase.assertEqual(self, verdict["actual_dim"], 16 - 9)
        section = InterpolationSystem.kernel_section(fmt, scheme, seed=5)
        unittest.TestCase.assertTrue(
            self, np.all(InterpolationSystem.residuals(section, scheme) == 0)
            )

    def test_2_empty_kernel(self):
        """
        Test 2: No section through too many points
        """
        fmt = SegreFormat.create([2], [2])
        scheme = InterpolationSystem.random_scheme(
            fmt, 3, np.random.default_rng(0), SCALAR_PRIME, P
            )
        with self.assertRaises(EmptySystemError):
            InterpolationSystem.kernel_section(fmt, scheme)

    def test_3_divisor_points(self):
        """
        Test 3: Double points on D share the last coordinate and are counted
        """
        fmt = SegreFormat.create([1, 1, 1], [2, 2, 2])
        scheme = InterpolationSystem.random_scheme(
            fmt, 1, np.random.default_rng(1), SCALAR_PRIME, P, ndivisor=2, nreduced=1
            )
        unittest.TestCase.assertEqual(
            self, InterpolationSystem.describe(scheme),
            "1 double + 2 double on D + 1 simple on D"
            )
        unittest.TestCase.assertEqual(
            self, InterpolationSystem.assemble(fmt, scheme).shape, (13, 27)
            )
        other = PointSampler.divisor_points(fmt, 1, np.random.default_rng(2), SCALAR_PRIME, P)
        with self.assertRaises(PreconditionError):
            InterpolationSystem.create_scheme(
                fmt, scheme["simple_points"], scheme["divisor_points"], other
                )

    def test_4_quartics_through_five_double_points(self):
        """
        Test 4: A plane quartic double at 5 general points exists
        """
        fmt = SegreFormat.create([2], [4])
        scheme = InterpolationSystem.random_scheme(
            fmt, 5, np.random.default_rng(4), SCALAR_PRIME, P
            )
        verdict = InterpolationSystem.sysdim(fmt, scheme)
        unittest.TestCase.assertEqual(self, verdict["rows"], 15)
        unittest.TestCase.assertEqual(self, verdict["expected_dim"], 0)
        unittest.TestCase.assertEqual(self, verdict["actual_dim"], 1)
        unittest.TestCase.assertEqual(self, verdict["status"], STATUS_DEFICIENT)


class TestHoraceCertifier_HoraceStep(unittest.TestCase):
    def test_1_example(self):
        """
        Test 1: (3,3,3) with 8 general and 5 divisor points
        """
        fmt = SegreFormat.create([1, 1, 1], [3, 3, 3])
        step = HoraceCertifier.horace_step(fmt, 8, 5, seed=1)
        unittest.TestCase.assertTrue(self, step["all_hold"])
        unittest.TestCase.assertEqual(self, step["failed_hypotheses"], [])
        unittest.TestCase.assertTrue(self, step["conclusion_verdict"]["independent"])
        unittest.TestCase.assertEqual(self, step["conclusion_verdict"]["rows"], 52)

    def test_2_no_divisor_points(self):
        """
        Test 2: h = 0 reduces to a degree drop
        """
        fmt = SegreFormat.create([1, 1, 1], [3, 3, 3])
        step = HoraceCertifier.horace_step(fmt, 8, 0, seed=2)
        unittest.TestCase.assertTrue(self, step["hypotheses_ok"]["A"])
        unittest.TestCase.assertEqual(self, step["conclusion_verdict"]["rows"], 32)

    def test_3_single_divisor_point(self):
        """
        Test 3: One double point on D always imposes independent conditions
        """
        fmt = SegreFormat.create([1, 1, 1], [2, 2, 2])
        step = HoraceCertifier.horace_step(fmt, 0, 1, seed=3)
        unittest.TestCase.assertTrue(self, step["hypotheses_ok"]["B"])
        unittest.TestCase.assertEqual(self, step["hypothesis_verdicts"]["B"]["rows"], 3)

    def test_4_bounds(self):
        """
        Test 4: Out of range l, h and degree are rejected
        """
        fmt = SegreFormat.create([1, 1, 1], [3, 3, 3])
        with self.assertRaises(PreconditionError):
            HoraceCertifier.horace_step(fmt, 0, 6)
        with self.assertRaises(PreconditionError):
            HoraceCertifier.horace_step(fmt, 12, 0)
        with self.assertRaises(PreconditionError):
            HoraceCertifier.horace_step(
                SegreFormat.create([1, 1, 1], [3, 3, 1], normalize=False), 1, 1
                )

    def test_5_randomized_consistency(self):
        """
        Test 5: Whenever the hypotheses hold the conclusion is independent
        """
        rng = np.random.default_rng(2024)
        formats = [
            SegreFormat.create([1, 1, 1], d, normalize=False)
            for d in ([2, 2, 2], [2, 2, 3], [2, 3, 4], [3, 3, 3], [2, 2, 5])
        ] + [SegreFormat.create([2, 1], [2, 3], normalize=False)]
        holding = 0
        for index in range(50):
            fmt = formats[index % len(formats)]
            h_max, l_max = SegreFormat.horace_bounds(fmt)
            l = int(rng.integers(0, l_max + 1))
            h = int(rng.integers(0, h_max + 1))
            step = HoraceCertifier.horace_step(
                fmt, l, h, seed=index, residual_check=False
                )
            if step["all_hold"]:
                holding += 1
                unittest.TestCase.assertTrue(
                    self, step["conclusion_verdict"]["independent"]
                    )
        unittest.TestCase.assertTrue(self, holding >= 1)


class TestHoraceCertifier_CertifyWeakly(unittest.TestCase):
    def test_1_three_factor_case(self):
        """
        Test 1: (3,3,14) with 60 points is certified by 12 statements
        """
        fmt = SegreFormat.create([1, 1, 1], [3, 3, 14])
        certificate = HoraceCertifier.certify_weakly(fmt, 60, seed=0)
        unittest.TestCase.assertEqual(self, certificate["schedule"]["t0"], 11)
        unittest.TestCase.assertEqual(self, len(certificate["nodes"]), 12)
        unittest.TestCase.assertEqual(self, certificate["status"], "certified")
        unittest.TestCase.assertEqual(self, certificate["failed_t"], [])
        first = certificate["nodes"][0]
        unittest.TestCase.assertEqual(
            self, (first["degree"], first["free_points"], first["divisor_points"]),
            (14, 55, 5)
            )
        last = certificate["nodes"][-1]
        unittest.TestCase.assertEqual(
            self, (last["kind"], last["degree"], last["free_points"], last["divisor_points"]),
            ("final", 3, 1, 4)
            )

    def test_2_collapsed_schedule(self):
        """
        Test 2: s <= h0 gives the final statement only
        """
        fmt = SegreFormat.create([1, 1, 1], [3, 3, 4])
        certificate = HoraceCertifier.certify_weakly(fmt, 3, seed=1)
        unittest.TestCase.assertEqual(self, len(certificate["nodes"]), 1)
        unittest.TestCase.assertEqual(self, certificate["nodes"][0]["kind"], "final")

    def test_3_degree_threshold(self):
        """
        Test 3: d_last = t0 + 2 is rejected
        """
        with self.assertRaises(PreconditionError):
            HoraceCertifier.certify_weakly(SegreFormat.create([1, 1, 1], [3, 3, 12]), 51)

    def test_4_worker_independence(self):
        """
        Test 4: One and two workers build the same certificate
        """
        fmt = SegreFormat.create([1, 1, 1], [2, 2, 6])
        a = HoraceCertifier.certify_weakly(fmt, 10, seed=4, jobs=1)
        b = HoraceCertifier.certify_weakly(fmt, 10, seed=4, jobs=2)
        unittest.TestCase.assertEqual(
            self,
            [(n["t"], n["verdict"]["rank"], n["ok"]) for n in a["nodes"]],
            [(n["t"], n["verdict"]["rank"], n["ok"]) for n in b["nodes"]]
            )
        unittest.TestCase.assertEqual(self, a["status"], b["status"])


class TestTangencyAnalyzer_CheckWeakDefectivity(unittest.TestCase):
    def test_1_double_line(self):
        """
        Test 1: The conic double at two points is the double line
        """
        report = TangencyAnalyzer.check_weak_defectivity(
            SegreFormat.create([2], [2]), 2, seed=0
            )
        unittest.TestCase.assertEqual(self, report["certification"], "certified")
        unittest.TestCase.assertTrue(self, report["weakly_defective"])
        unittest.TestCase.assertFalse(self, any(report["hessian_ok"]))
        unittest.TestCase.assertTrue(
            self,
            any(p["component"] == COMPONENT_CURVE for p in report["extra_singularities"])
            )

    def test_2_ordinary_double_points(self):
        """
        Test 2: Forms of bidegree (4,5) double at 9 points
        """
        fmt = SegreFormat.create([1, 1], [4, 5])
        for seed in range(5):
            report = TangencyAnalyzer.check_weak_defectivity(fmt, 9, seed=seed)
            unittest.TestCase.assertTrue(self, all(report["hessian_ok"]))
            unittest.TestCase.assertEqual(self, report["extra_singularities"], [])
            unittest.TestCase.assertFalse(self, report["weakly_defective"])
            unittest.TestCase.assertTrue(
                self, max(report["imposed_residuals"]) <= 1e-8
                )

    def test_3_hessian(self):
        """
        Test 3: Nondegeneracy of small Hessians
        """
        ok, ratio = TangencyAnalyzer.hessian_nondegenerate(np.eye(2))
        unittest.TestCase.assertTrue(self, ok)
        unittest.TestCase.assertAlmostEqual(self, ratio, 1.0)
        ok, _ = TangencyAnalyzer.hessian_nondegenerate(np.array([[1.0, 1.0], [1.0, 1.0]]))
        unittest.TestCase.assertFalse(self, ok)
        ok, _ = TangencyAnalyzer.hessian_nondegenerate(
            np.array([[1, 2], [2, 4]], dtype=np.int64), SCALAR_PRIME, P
            )
        unittest.TestCase.assertFalse(self, ok)

    def test_4_hessian_of_product(self):
        """
        Test 4: The Hessian of x0 x1 at the origin
        """
        fmt = SegreFormat.create([2], [2])
        basis = MultiPoly.basis(fmt)
        coeffs = np.zeros(basis["size"], dtype=complex)
        index = [
            i for i in range(basis["size"]) if MultiPoly.monomial(basis, i) == [(1, 1, 0)]
        ][0]
        coeffs[index] = 1.0
        hessian = TangencyAnalyzer.hessian_at(
            MultiPoly.section(fmt, coeffs), [[0j, 0j]]
            )
        unittest.TestCase.assertTrue(
            self, np.allclose(hessian, np.array([[0, 1], [1, 0]]))
            )


class TestWaringDecomposer_Canonicalize(unittest.TestCase):
    def test_1_gauge_invariance(self):
        """
        Test 1: Rescaling, rephasing and permuting terms does not change
        the canonical form
        """
        fmt = SegreFormat.create([1, 2], [3, 2], normalize=False)
        _, witness = WaringDecomposer.synthesize_target(fmt, 3, seed=8)
        rng = np.random.default_rng(9)
        for _ in range(100):
            terms = []
            for term in witness["terms"]:
                factors = rng.standard_normal(fmt["n"]) + 1j * rng.standard_normal(fmt["n"])
                scalar = term["scalar"] * np.prod([
                    c ** (-d) for (c, d) in zip(factors, fmt["d"])
                ])
                terms.append({
                    "scalar": scalar,
                    "linforms": [c * l for (c, l) in zip(factors, term["linforms"])],
                })
            order = rng.permutation(len(terms))
            moved = dict(witness, terms=[terms[i] for i in order])
            canonical = WaringDecomposer.canonicalize(moved)
            for (a, b) in zip(canonical["terms"], witness["terms"]):
                unittest.TestCase.assertTrue(
                    self, DecompositionMatcher.term_distance(a, b) <= 1e-9
                    )

    def test_2_zero_linform(self):
        """
        Test 2: A vanishing linear form is rejected
        """
        fmt = SegreFormat.create([1], [2])
        dec = {
            "format": fmt, "terms": [{"scalar": 1.0, "linforms": [np.zeros(2)]}],
            "residual": 0.0, "converged": True, "iterations": 0, "history": [],
        }
        with self.assertRaises(PreconditionError):
            WaringDecomposer.canonicalize(dec)


class TestWaringDecomposer_Fit(unittest.TestCase):
    def test_1_synthesized_target(self):
        """
        Test 1: The witness reproduces the target exactly and deterministically
        """
        fmt = SegreFormat.create([2], [5])
        target, witness = WaringDecomposer.synthesize_target(fmt, 6, seed=1)
        again, _ = WaringDecomposer.synthesize_target(fmt, 6, seed=1)
        unittest.TestCase.assertEqual(self, witness["residual"], 0.0)
        unittest.TestCase.assertEqual(self, target["coeffs"].tobytes(), again["coeffs"].tobytes())
        unittest.TestCase.assertEqual(self, len(witness["terms"]), 7)

    def test_2_fixed_point(self):
        """
        Test 2: Starting at the witness converges at once
        """
        fmt = SegreFormat.create([2], [5])
        target, witness = WaringDecomposer.synthesize_target(fmt, 6, seed=2)
        dec = WaringDecomposer.fit(target, 6, init=witness)
        unittest.TestCase.assertTrue(self, dec["converged"])
        unittest.TestCase.assertTrue(self, dec["residual"] <= 1e-12)

    def test_3_witness_recovery(self):
        """
        Test 3: A perturbed witness converges back to the witness
        """
        fmt = SegreFormat.create([2], [5])
        target, witness = WaringDecomposer.synthesize_target(fmt, 6, seed=3)
        rng = np.random.default_rng(4)
        perturbed = dict(witness, terms=[
            {
                "scalar": term["scalar"],
                "linforms": [
                    l + 1e-3 * (rng.standard_normal(l.shape) + 1j * rng.standard_normal(l.shape))
                    for l in term["linforms"]
                ],
            }
            for term in witness["terms"]
        ])
        dec = WaringDecomposer.fit(target, 6, init=perturbed)
        unittest.TestCase.assertTrue(self, dec["converged"])
        unittest.TestCase.assertTrue(self, DecompositionMatcher.distance(dec, witness) <= 1e-4)
        history = dec["history"]
        unittest.TestCase.assertTrue(
            self, all(b <= a for (a, b) in zip(history, history[1:]))
            )

    def test_4_too_few_terms(self):
        """
        Test 4: One term cannot fit a general rank-7 target
        """
        fmt = SegreFormat.create([2], [5])
        target, _ = WaringDecomposer.synthesize_target(fmt, 6, seed=5)
        dec = WaringDecomposer.fit(target, 0, init_seed=1, max_iterations=100)
        unittest.TestCase.assertFalse(self, dec["converged"])
        unittest.TestCase.assertTrue(self, dec["residual"] > 1e-3)
        with self.assertRaises(PreconditionError):
            WaringDecomposer.fit(target, -1)

    def test_5_jacobian(self):
        """
        Test 5: The analytic Jacobian matches central differences
        """
        fmt = SegreFormat.create([1, 2], [3, 2], normalize=False)
        target, _ = WaringDecomposer.synthesize_target(fmt, 1, seed=6)
        model = RankOneModel(fmt, 2, target["coeffs"])
        rng = np.random.default_rng(10)
        step = 1e-6
        for _ in range(20):
            x = rng.standard_normal(model.size) + 1j * rng.standard_normal(model.size)
            jacobian = model.jacobian(x)
            numeric = np.empty_like(jacobian)
            for j in range(model.size):
                e = np.zeros(model.size, dtype=np.complex128)
                e[j] = step
                numeric[:, j] = (model.residual(x + e) - model.residual(x - e)) / (2 * step)
            error = np.linalg.norm(jacobian - numeric) / np.linalg.norm(jacobian)
            unittest.TestCase.assertTrue(self, error <= 1e-6)


class TestWaringDecomposer_Cluster(unittest.TestCase):
    def test_1_duplicates(self):
        """
        Test 1: Copies of one decomposition form one cluster in any order
        """
        fmt = SegreFormat.create([1, 1], [2, 2])
        _, a = WaringDecomposer.synthesize_target(fmt, 2, seed=1)
        _, b = WaringDecomposer.synthesize_target(fmt, 2, seed=2)
        result = WaringDecomposer.cluster([a, b, a, a])
        unittest.TestCase.assertEqual(self, result["nu_est"], 2)
        unittest.TestCase.assertEqual(self, result["sizes"], [3, 1])
        result = WaringDecomposer.cluster([b, a, a, a])
        unittest.TestCase.assertEqual(self, result["nu_est"], 2)
        unittest.TestCase.assertEqual(self, WaringDecomposer.cluster([a, a])["nu_est"], 1)
        unittest.TestCase.assertEqual(self, WaringDecomposer.cluster([])["nu_est"], 0)

    def test_2_mean_term_distance(self):
        """
        Test 2: The clustering distance is the matched cost per term
        """
        fmt = SegreFormat.create([1, 1], [2, 2])
        _, a = WaringDecomposer.synthesize_target(fmt, 2, seed=1)
        moved = dict(a["terms"][0], scalar=a["terms"][0]["scalar"] * 1.001)
        b = dict(a, terms=[moved] + a["terms"][1:])
        expected = DecompositionMatcher.term_distance(a["terms"][0], moved) / 3
        unittest.TestCase.assertAlmostEqual(
            self, DecompositionMatcher.distance(a, b), expected, places=12
            )
        unittest.TestCase.assertEqual(
            self, WaringDecomposer.cluster([a, b], tol=expected * 1.01)["nu_est"], 1
            )
        unittest.TestCase.assertEqual(
            self, WaringDecomposer.cluster([a, b], tol=expected * 0.99)["nu_est"], 2
            )


class TestWaringDecomposer_NuExperiment(unittest.TestCase):
    def test_1_plane_quintic(self):
        """
        Test 1: A general plane quintic has one decomposition in 7 terms
        """
        report = WaringDecomposer.nu_experiment(
            SegreFormat.create([2], [5]), 6, nstarts=200, seed=0, jobs=4
            )
        unittest.TestCase.assertFalse(self, report["inconclusive"])
        unittest.TestCase.assertTrue(self, report["convergence_rate"] >= 0.3)
        unittest.TestCase.assertEqual(self, report["nu_est"], 1)
        unittest.TestCase.assertEqual(self, report["witness_cluster"], 0)
        unittest.TestCase.assertEqual(self, report["statement"], "nu >= 1")
        unittest.TestCase.assertEqual(self, set(report["sweep"].values()), {1})

    def test_2_two_factors(self):
        """
        Test 2: Forms of bidegree (4,5) have several decompositions in 10 terms
        """
        report = WaringDecomposer.nu_experiment(
            SegreFormat.create([1, 1], [4, 5]), 9, nstarts=200, seed=0, jobs=4
            )
        unittest.TestCase.assertFalse(self, report["inconclusive"])
        unittest.TestCase.assertTrue(self, report["nu_est"] >= 2)

    def test_3_equal_degrees(self):
        """
        Test 3: Forms of bidegree (5,5) have several decompositions in 12 terms
        """
        report = WaringDecomposer.nu_experiment(
            SegreFormat.create([1, 1], [5, 5]), 11, nstarts=200, seed=0, jobs=4
            )
        unittest.TestCase.assertFalse(self, report["inconclusive"])
        unittest.TestCase.assertTrue(self, report["nu_est"] >= 2)


class TestCorollaryPipeline_Run(unittest.TestCase):
    def test_1_defective_control(self):
        """
        Test 1: The pipeline halts at the secant count of conics
        """
        case = {
            "format": SegreFormat.create([2], [2]), "k": 1,
            "nu_expected": "unknown", "assumption1_ok": True,
        }
        report = CorollaryPipeline.corollary_pipeline(case, seed=0)
        unittest.TestCase.assertEqual(self, report["halted_at"], "secant_dim")
        unittest.TestCase.assertFalse(self, report["hypotheses_ok"])
        unittest.TestCase.assertIsNone(self, report["weak_defectivity"])

    def test_2_two_factor_case(self):
        """
        Test 2: Every check passes for bidegree (4,5)
        """
        case = CorollaryPipeline.find_case(
            PerfectCaseEnumerator.enumerate_corollary_two(5),
            SegreFormat.create([1, 1], [4, 5])
            )
        report = CorollaryPipeline.corollary_pipeline(case, seed=0)
        unittest.TestCase.assertIsNone(self, report["halted_at"])
        unittest.TestCase.assertTrue(self, report["hypotheses_ok"])
        unittest.TestCase.assertTrue(self, report["nef_ok"])
        unittest.TestCase.assertEqual(
            self, report["statement"], "hypotheses verified (probabilistic)"
            )

    def test_3_unknown_case(self):
        """
        Test 3: Formats outside the family are rejected
        """
        with self.assertRaises(PreconditionError):
            CorollaryPipeline.find_case(
                PerfectCaseEnumerator.enumerate_corollary_two(5),
                SegreFormat.create([1, 1], [4, 4])
                )


class TestFileDataIO_Tensor(unittest.TestCase):
    def test_1_save_and_load(self):
        """
        Test 1: A complex tensor file reads back to the same section
        """
        fmt = SegreFormat.create([1, 1], [2, 3])
        target, _ = WaringDecomposer.synthesize_target(fmt, 1, seed=3)
        with tempfile.TemporaryDirectory() as folder:
            filename = os.path.join(folder, "target.json")
            FileDataIO.save_tensor(filename, target)
            loaded = FileDataIO.load_tensor(filename)
        unittest.TestCase.assertEqual(self, loaded["format"]["d"], [2, 3])
        unittest.TestCase.assertTrue(self, np.allclose(loaded["coeffs"], target["coeffs"]))

    def test_2_missing_file(self):
        """
        Test 2: Missing files raise
        """
        with self.assertRaisesRegex(Exception, "Failed to access file"):
            FileDataIO.load_tensor("./no_such_tensor.json")

    def test_3_jsonable(self):
        """
        Test 3: Complex, numpy and rational values become JSON values
        """
        from fractions import Fraction
        value = FileDataIO.to_jsonable(
            {"a": np.array([1 + 2j]), "b": Fraction(1, 3), "c": np.int64(4), "d": True}
            )
        unittest.TestCase.assertEqual(
            self, value, {"a": [[1.0, 2.0]], "b": "1/3", "c": 4, "d": True}
            )

    def test_4_exact_round_trip(self):
        """
        Test 4: Saving a loaded tensor file reproduces it byte for byte
        """
        fmt = SegreFormat.create([2], [3])
        target, _ = WaringDecomposer.synthesize_target(fmt, 2, seed=8)
        with tempfile.TemporaryDirectory() as folder:
            first = os.path.join(folder, "first.json")
            second = os.path.join(folder, "second.json")
            FileDataIO.save_tensor(first, target)
            FileDataIO.save_tensor(second, FileDataIO.load_tensor(first))
            with open(first, "rb") as a, open(second, "rb") as b:
                unittest.TestCase.assertEqual(self, a.read(), b.read())

    def test_5_prime_without_modulus(self):
        """
        Test 5: A prime tensor file without its modulus is rejected
        """
        with tempfile.TemporaryDirectory() as folder:
            filename = os.path.join(folder, "prime.json")
            with open(filename, "w") as tensor_file:
                json.dump({
                    "r": [1], "d": [1], "scalar_kind": "prime", "coefficients": [1, 2]
                }, tensor_file)
            with self.assertRaisesRegex(FormatError, "Failed to read tensor.*prime"):
                FileDataIO.load_tensor(filename)


class TestJobRunner_Map(unittest.TestCase):
    def test_1_order(self):
        """
        Test 1: Results come back in job order with and without workers
        """
        jobs = [(5, 2), (6, 3), (10, 1)]
        unittest.TestCase.assertEqual(
            self, JobRunner.map(SegreFormat.binomial, jobs, 1), [10, 20, 10]
            )
        unittest.TestCase.assertEqual(
            self, JobRunner.map(SegreFormat.binomial, jobs, 2), [10, 20, 10]
            )

    def test_2_seed_paths(self):
        """
        Test 2: Seed paths are reproducible and distinct
        """
        unittest.TestCase.assertEqual(
            self, SeedStream.child_seed(1, (2, 3)), SeedStream.child_seed(1, (2, 3))
            )
        unittest.TestCase.assertNotEqual(
            self, SeedStream.child_seed(1, (2, 3)), SeedStream.child_seed(1, (3, 2))
            )


class TestWaringLabCli_Run(unittest.TestCase):
    def test_1_defect_report(self):
        """
        Test 1: A defective verdict is a completed run with a full report
        """
        with tempfile.TemporaryDirectory() as folder:
            out = os.path.join(folder, "report.json")
            status = WaringLabCli.run(
                ["defect", "--format", "r=2;d=2", "--k", "1", "--seed", "3", "--out", out]
                )
            with open(out) as report_file:
                report = json.load(report_file)
        unittest.TestCase.assertEqual(self, status, 0)
        unittest.TestCase.assertEqual(self, report["result"]["status"], "deficient")
        unittest.TestCase.assertEqual(self, report["config"]["seed"], 3)
        unittest.TestCase.assertEqual(self, report["config"]["options"]["k"], 1)
        unittest.TestCase.assertIn(self, "version", report)

    def test_2_invalid_format(self):
        """
        Test 2: An invalid format string exits 2 without a report
        """
        with tempfile.TemporaryDirectory() as folder:
            out = os.path.join(folder, "report.json")
            status = WaringLabCli.run(["defect", "--format", "r=2;d", "--k", "1", "--out", out])
            unittest.TestCase.assertFalse(self, os.path.exists(out))
        unittest.TestCase.assertEqual(self, status, 2)
        unittest.TestCase.assertEqual(self, WaringLabCli.run(["nonsense"]), 2)

    def test_3_enumerate_csv(self):
        """
        Test 3: Two-factor enumeration writes two CSV rows
        """
        with tempfile.TemporaryDirectory() as folder:
            out = os.path.join(folder, "cases.csv")
            status = WaringLabCli.run(["enumerate", "--corollary", "2", "--dmax", "5", "--out", out])
            with open(out) as csv_file:
                lines = [line for line in csv_file.read().splitlines() if line]
        unittest.TestCase.assertEqual(self, status, 0)
        unittest.TestCase.assertEqual(self, len(lines), 3)

    def test_4_flags_from_file(self):
        """
        Test 4: Flags read from a file give the same report as on the line
        """
        with tempfile.TemporaryDirectory() as folder:
            flags = os.path.join(folder, "flags.txt")
            with open(flags, "w") as flags_file:
                flags_file.write("--format\nr=1,1;d=2,3\n--k\n2\n")
            first = os.path.join(folder, "a.json")
            second = os.path.join(folder, "b.json")
            WaringLabCli.run(["defect", "@" + flags, "--out", first])
            WaringLabCli.run(["defect", "--format", "r=1,1;d=2,3", "--k", "2", "--out", second])
            with open(first) as a, open(second) as b:
                unittest.TestCase.assertEqual(self, json.load(a)["result"], json.load(b)["result"])

    def test_5_json_flag(self):
        """
        Test 5: --json writes the verdict record to stdout
        """
        stream = io.StringIO()
        with contextlib.redirect_stdout(stream):
            status = WaringLabCli.run(
                ["defect", "--format", "r=1,1;d=4,5", "--k", "9", "--trials", "3", "--json"]
                )
        report = json.loads(stream.getvalue())
        unittest.TestCase.assertEqual(self, status, 0)
        unittest.TestCase.assertEqual(self, report["config"]["output_format"], "json")
        unittest.TestCase.assertEqual(self, report["result"]["status"], "expected")
        unittest.TestCase.assertEqual(self, report["result"]["rank"], 30)
        unittest.TestCase.assertNotIn(self, "json_output", report["config"]["options"])

    def test_6_csv_flag(self):
        """
        Test 6: --csv switches a verdict to a CSV row
        """
        stream = io.StringIO()
        with contextlib.redirect_stdout(stream):
            status = WaringLabCli.run(["defect", "--format", "r=2;d=2", "--k", "1", "--csv"])
        text = stream.getvalue()
        unittest.TestCase.assertEqual(self, status, 0)
        unittest.TestCase.assertFalse(self, text.startswith("{"))
        unittest.TestCase.assertIn(self, "status", text.splitlines()[0])
        unittest.TestCase.assertIn(self, "deficient", text)

    def test_7_worker_count(self):
        """
        Test 7: The result does not depend on the number of workers
        """
        results = []
        with tempfile.TemporaryDirectory() as folder:
            for jobs in ("1", "8"):
                out = os.path.join(folder, f"certificate_{jobs}.json")
                status = WaringLabCli.run([
                    "certify", "--format", "r=1,1,1;d=2,2,6", "--s", "10",
                    "--seed", "5", "--jobs", jobs, "--out", out
                ])
                unittest.TestCase.assertEqual(self, status, 0)
                with open(out) as report_file:
                    results.append(json.load(report_file)["result"])
        unittest.TestCase.assertEqual(self, results[0], results[1])


if __name__ == "__main__":
    unittest.main()
