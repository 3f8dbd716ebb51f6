######################################################################
# Copyright 2016, 2024 John J. Rofrano. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# https://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
######################################################################

"""
Test cases for the identity suites and convergence sweeps
"""

from unittest import TestCase

from discmeans.fields import harmonic_poly, plane_helmholtz, plane_panharmonic, quadratic_nonsolution
from discmeans.models import DataValidationError, Point, QuadratureSpec
from discmeans.specfun import coeff_a
from discmeans.suites import (
    CONVERGE_NTHETA,
    CONVERGE_ORDERS,
    IDENTITY_COLUMNS,
    IDENTITY_NAMES,
    ConvergeRow,
    CorollaryRow,
    IdentityRow,
    check_identity,
    convergence_reached,
    field_spot_checks,
    is_monotone_to_floor,
    run_convergence,
    run_identity_suite,
)

ORIGIN = Point(0.0, 0.0)
SPEC = QuadratureSpec()


######################################################################
#  R O W   T E S T   C A S E S
######################################################################
class TestRows(TestCase):
    """Identity and convergence rows"""

    def test_identity_row(self):
        """It should compute the residual relative to the scale"""
        row = IdentityRow("weighted-mhh", "quad", ORIGIN, 1.0, 2.0, lhs=2.0, rhs=2.5, tolerance=0.3, scale=2.0)
        self.assertEqual(row.residual, 0.5)
        self.assertEqual(row.relative, 0.25)
        self.assertTrue(row.passed)
        data = row.serialize()
        self.assertEqual(list(data), IDENTITY_COLUMNS)
        self.assertEqual((data["x1"], data["x2"]), (0.0, 0.0))

    def test_failed_row(self):
        """It should fail a row whose residual exceeds the tolerance"""
        row = IdentityRow("circle-mhh", "quad", ORIGIN, 1.0, 2.0, lhs=1.0, rhs=1.1, tolerance=1e-9)
        self.assertFalse(row.passed)
        self.assertFalse(row.serialize()["passed"])

    def test_corollary_row(self):
        """It should require a strictly positive residual that reaches the margin"""
        self.assertTrue(CorollaryRow("corollary-mhh", "f", ORIGIN, 1.0, 1.0, 0.5, 0.6, 1e-7, margin=0.1).passed)
        self.assertFalse(CorollaryRow("corollary-mhh", "f", ORIGIN, 1.0, 1.0, 0.5, 0.55, 1e-7, margin=0.1).passed)
        self.assertFalse(CorollaryRow("corollary-mhh", "f", ORIGIN, 1.0, 1.0, 0.5, 0.5, 1e-7, margin=0.0).passed)

    def test_converge_row(self):
        """It should serialize a convergence cell"""
        row = ConvergeRow("weighted-mhh", "quad", 64, 8, 1e-6)
        self.assertEqual(row.serialize()["n_theta"], 64)


######################################################################
#  C H E C K   I D E N T I T Y   T E S T   C A S E S
######################################################################
class TestCheckIdentity(TestCase):
    """Single identity checks"""

    def test_weighted_panharmonic(self):
        """It should put a(2) v(x) on the left for mu = 2, r = 1"""
        row = check_identity("weighted-mhh", plane_panharmonic(2.0), ORIGIN, 1.0, SPEC)
        self.assertAlmostEqual(row.lhs, 0.639792651, delta=1e-9)
        self.assertAlmostEqual(row.lhs, coeff_a(2.0), places=15)
        self.assertTrue(row.passed)

    def test_weighted_harmonic_constant(self):
        """It should hold the constant field to 1e-12"""
        row = check_identity("weighted-harm", harmonic_poly(0), Point(0.3, 0.3), 0.5, SPEC)
        self.assertEqual(row.lhs, 0.5)
        self.assertAlmostEqual(row.rhs, 0.5, delta=1e-12)
        self.assertEqual(row.tolerance, 1e-12)
        self.assertTrue(row.passed)

    def test_every_named_identity(self):
        """It should pass each identity for a field of the matching kind"""
        fields = {
            "circle-mhh": plane_panharmonic(1.0, 0.5),
            "disc-mhh": plane_panharmonic(1.0, 0.5),
            "weighted-mhh": plane_panharmonic(1.0, 0.5),
            "corollary-mhh": plane_panharmonic(1.0, 0.5),
            "weighted-harm": harmonic_poly(3, "im"),
            "circle-hh": plane_helmholtz(2.0, 0.1),
            "disc-hh": plane_helmholtz(2.0, 0.1),
            "weighted-hh": plane_helmholtz(2.0, 0.1),
            "green": quadratic_nonsolution(),
        }
        self.assertEqual(set(fields), set(IDENTITY_NAMES))
        for identity, v in fields.items():
            row = check_identity(identity, v, Point(0.1, -0.2), 0.75, SPEC)
            self.assertTrue(row.passed, identity)
            self.assertEqual(row.identity, identity)

    def test_corollary_margin(self):
        """It should report the strict gap (a(mu r) - 1/2) v(x)"""
        v = plane_panharmonic(2.0)
        row = check_identity("corollary-mhh", v, ORIGIN, 1.0, SPEC)
        self.assertAlmostEqual(row.margin, coeff_a(2.0) - 0.5, places=15)
        self.assertGreater(row.residual, 0.0)

    def test_mismatched_fields(self):
        """It should raise DataValidationError for unknown identities or field kinds"""
        self.assertRaises(DataValidationError, check_identity, "ellipse-mhh", plane_panharmonic(1.0), ORIGIN, 1.0, SPEC)
        self.assertRaises(DataValidationError, check_identity, "weighted-mhh", plane_helmholtz(1.0), ORIGIN, 1.0, SPEC)
        self.assertRaises(DataValidationError, check_identity, "corollary-mhh", plane_helmholtz(1.0), ORIGIN, 1.0, SPEC)


######################################################################
#  S U I T E   T E S T   C A S E S
######################################################################
class TestIdentitySuite(TestCase):
    """Identity grids"""

    def test_default_suite_passes(self):
        """It should pass every row of the default grid"""
        rows = run_identity_suite(SPEC)
        self.assertGreater(len(rows), 500)
        failed = [row.serialize() for row in rows if not row.passed]
        self.assertEqual(failed, [])
        self.assertEqual({row.identity for row in rows}, set(IDENTITY_NAMES))

    def test_weighted_grid_at_doubled_resolution(self):
        """It should hold the weighted identity to 1e-10 over the whole grid at the doubled spec"""
        rows = run_identity_suite(SPEC.refined(), identities=("weighted-mhh",))
        self.assertGreater(len(rows), 100)
        worst = max(rows, key=lambda row: row.relative)
        self.assertLessEqual(worst.relative, 1e-10, worst.serialize())

    def test_rows_are_deterministic(self):
        """It should emit identical rows on repeated runs"""
        first = run_identity_suite(SPEC, identities=("weighted-hh",), radii=(0.5,))
        second = run_identity_suite(SPEC, identities=("weighted-hh",), radii=(0.5,))
        self.assertEqual([row.serialize() for row in first], [row.serialize() for row in second])

    def test_harmonic_grid(self):
        """It should check Re and Im of z^k for k <= 6 at every center and radius"""
        rows = run_identity_suite(SPEC, identities=("weighted-harm",), radii=(0.5,), centers=(ORIGIN,))
        self.assertEqual(len(rows), 14)
        self.assertTrue(all(row.passed for row in rows))

    def test_user_fields(self):
        """It should use user fields only for identities of the matching kind"""
        rows = run_identity_suite(
            SPEC,
            identities=("weighted-mhh", "weighted-hh"),
            fields=[plane_helmholtz(2.0)],
            radii=(0.5, 1.0),
            centers=(ORIGIN,),
        )
        self.assertEqual([row.identity for row in rows], ["weighted-hh", "weighted-hh"])

    def test_selected_frequencies(self):
        """It should restrict the default families to the requested frequencies"""
        rows = run_identity_suite(SPEC, identities=("circle-mhh",), radii=(1.0,), centers=(ORIGIN,), mu_values=(2.0,))
        self.assertEqual(len(rows), 3)
        for row in rows:
            self.assertAlmostEqual(row.frequency, 2.0, places=14)
        helmholtz = run_identity_suite(SPEC, identities=("disc-hh",), radii=(1.0,), centers=(ORIGIN,), lambda_values=(3.0,))
        self.assertEqual({row.frequency for row in helmholtz}, {3.0})

    def test_unknown_identity(self):
        """It should raise DataValidationError for an unknown identity"""
        self.assertRaises(DataValidationError, run_identity_suite, SPEC, ("parabolic",))

    def test_field_spot_checks(self):
        """It should pass the seeded spot checks"""
        rows = field_spot_checks(42)
        self.assertEqual(len(rows), 7)
        self.assertTrue(all(row.passed for row in rows))
        custom = field_spot_checks(7, ("quad", "plane-hh:lambda=2"))
        self.assertEqual([row.field for row in custom], ["quad", "plane-hh:lambda=2,theta=0"])


######################################################################
#  C O N V E R G E N C E   T E S T   C A S E S
######################################################################
class TestConvergence(TestCase):
    """Resolution sweeps"""

    def test_weighted_identity_converges(self):
        """It should reach 1e-10 at the finest spec for mu r = 2"""
        rows = run_convergence("weighted-mhh", plane_panharmonic(2.0), ORIGIN, 1.0, SPEC)
        self.assertEqual(len(rows), len(CONVERGE_NTHETA) * len(CONVERGE_ORDERS))
        self.assertEqual((rows[-1].n_theta, rows[-1].radial_order), (512, 32))
        self.assertTrue(convergence_reached(rows))
        self.assertGreater(rows[0].residual, rows[-1].residual)

    def test_constant_field_stays_at_floor(self):
        """It should hold the constant field at the floor once the log weight is resolved"""
        rows = run_convergence("weighted-harm", harmonic_poly(0), ORIGIN, 1.0, SPEC)
        for row in rows:
            if row.radial_order >= 16:
                self.assertLessEqual(row.residual, 1e-12)
        # the angular rule is exact for a constant, so only the radial order matters
        for order in CONVERGE_ORDERS:
            residuals = [row.residual for row in rows if row.radial_order == order]
            self.assertAlmostEqual(min(residuals), max(residuals), delta=1e-13)

    def test_monotone_check(self):
        """It should detect a residual that grows under refinement"""
        good = [ConvergeRow("i", "f", n, 4, res) for n, res in ((16, 1e-3), (32, 1e-7), (64, 1e-13), (128, 5e-13))]
        bad = [ConvergeRow("i", "f", n, 4, res) for n, res in ((16, 1e-5), (32, 1e-3))]
        self.assertTrue(is_monotone_to_floor(good))
        self.assertFalse(is_monotone_to_floor(bad))
        self.assertFalse(convergence_reached(bad))
