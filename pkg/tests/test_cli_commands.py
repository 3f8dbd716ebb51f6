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
CLI Command Extensions for Flask
"""

import csv
import io
import json
import logging
import math
import os
import tempfile
from unittest import TestCase
from unittest.mock import patch

from discmeans import create_app
from discmeans.common import status
from discmeans.models import CSV_COLUMNS, Point, RecoveryResult
from discmeans.specfun import coeff_a
from discmeans.suites import CONVERGE_COLUMNS, IDENTITY_COLUMNS

DISC = {"type": "disc", "center": [0.0, 0.0], "radius": 1.0}
SQUARE = {"type": "polygon", "anchor": [0.5, 0.5], "vertices": [[0, 0], [1, 0], [1, 1], [0, 1]]}


def read_csv(text):
    """Parses CSV output into a header and a list of rows"""
    rows = list(csv.reader(io.StringIO(text)))
    return rows[0], rows[1:]


class TestFlaskCLI(TestCase):
    """Flask CLI Command Tests"""

    @classmethod
    def setUpClass(cls):
        cls.app = create_app()
        cls.app.logger.setLevel(logging.CRITICAL)

    def setUp(self):
        self.runner = self.app.test_cli_runner()
        self.tmpdir = tempfile.TemporaryDirectory()  # pylint: disable=consider-using-with

    def tearDown(self):
        self.tmpdir.cleanup()

    def domain_file(self, data, name="domain.json"):
        """Writes a domain file into the temporary directory"""
        path = os.path.join(self.tmpdir.name, name)
        with open(path, "w", encoding="utf-8") as handle:
            json.dump(data, handle)
        return path

    ######################################################################
    #  V E R I F Y
    ######################################################################

    def test_verify_weighted_identity(self):
        """It should verify the weighted identity for mu = 2, r = 1"""
        args = ["verify", "--identity", "weighted-mhh", "--mu", "2", "--r", "1", "--x", "0", "--y", "0"]
        result = self.runner.invoke(args=args)
        self.assertEqual(result.exit_code, status.EXIT_OK)
        header, rows = read_csv(result.stdout)
        self.assertEqual(header, IDENTITY_COLUMNS)
        weighted = [row for row in rows if row[0] == "weighted-mhh"]
        self.assertEqual(len(weighted), 3)
        self.assertEqual(weighted[0][1], "plane-mhh:mu=2,theta=0.3")
        self.assertAlmostEqual(float(weighted[0][6]), coeff_a(2.0) * 1.0, delta=1e-12)
        self.assertTrue(all(row[-1] == "true" for row in rows))

    def test_verify_constant_field(self):
        """It should hold the constant field under the weighted harmonic identity"""
        result = self.runner.invoke(args=["verify", "--identity", "weighted-harm", "--field", "harm-poly:k=0", "--r", "0.5"])
        self.assertEqual(result.exit_code, status.EXIT_OK)
        _, rows = read_csv(result.stdout)
        harmonic = [row for row in rows if row[0] == "weighted-harm"]
        self.assertEqual(len(harmonic), 3)
        for row in harmonic:
            self.assertEqual(float(row[6]), 0.5)
            self.assertAlmostEqual(float(row[7]), 0.5, delta=1e-12)

    def test_verify_json_to_file(self):
        """It should write JSON rows to --out"""
        out = os.path.join(self.tmpdir.name, "rows.json")
        result = self.runner.invoke(
            args=["verify", "--identity", "green", "--field", "quad", "--format", "json", "--out", out]
        )
        self.assertEqual(result.exit_code, status.EXIT_OK)
        with open(out, encoding="utf-8") as handle:
            rows = json.load(handle)
        self.assertEqual(rows[0]["identity"], "green")
        self.assertTrue(all(row["passed"] for row in rows))

    def test_verify_is_reproducible(self):
        """It should write the same bytes on two runs of the default suite"""
        first = self.runner.invoke(args=["verify"])
        second = self.runner.invoke(args=["verify"])
        self.assertEqual(first.exit_code, status.EXIT_OK)
        self.assertEqual(second.exit_code, status.EXIT_OK)
        self.assertGreater(len(first.stdout), 0)
        self.assertEqual(first.stdout, second.stdout)

    def test_verify_bad_descriptor(self):
        """It should exit with a configuration error for an unknown field family"""
        result = self.runner.invoke(args=["verify", "--field", "cubic:k=2"])
        self.assertEqual(result.exit_code, status.EXIT_CONFIG_ERROR)

    def test_verify_half_a_point(self):
        """It should require --x and --y together"""
        result = self.runner.invoke(args=["verify", "--identity", "circle-mhh", "--x", "0.5"])
        self.assertEqual(result.exit_code, status.EXIT_CONFIG_ERROR)

    def test_verify_bad_spec(self):
        """It should reject an odd number of angular nodes"""
        result = self.runner.invoke(args=["verify", "--identity", "circle-mhh", "--ntheta", "17"])
        self.assertEqual(result.exit_code, status.EXIT_CONFIG_ERROR)

    def test_verify_tolerance_failure(self):
        """It should exit 1 when the quadrature is too coarse for the tolerance"""
        coarse = ["--ntheta", "16", "--order", "2", "--panels", "1"]
        result = self.runner.invoke(args=["verify", "--identity", "weighted-mhh", "--mu", "4", "--r", "1"] + coarse)
        self.assertEqual(result.exit_code, status.EXIT_TOLERANCE_FAILURE)
        _, rows = read_csv(result.stdout)
        self.assertIn("false", [row[-1] for row in rows])

    ######################################################################
    #  C O N V E R G E
    ######################################################################

    def test_converge(self):
        """It should sweep the resolutions and reach the target"""
        result = self.runner.invoke(args=["converge"])
        self.assertEqual(result.exit_code, status.EXIT_OK)
        header, rows = read_csv(result.stdout)
        self.assertEqual(header, CONVERGE_COLUMNS)
        self.assertEqual(len(rows), 24)
        self.assertLessEqual(float(rows[-1][4]), 1e-10)

    def test_converge_kind_mismatch(self):
        """It should refuse a panharmonic field for a Helmholtz identity"""
        result = self.runner.invoke(args=["converge", "--identity", "weighted-hh"])
        self.assertEqual(result.exit_code, status.EXIT_CONFIG_ERROR)

    ######################################################################
    #  C H A R A C T E R I Z E
    ######################################################################

    def test_characterize_disc(self):
        """It should certify a disc file and exit 0"""
        path = self.domain_file(DISC)
        result = self.runner.invoke(args=["characterize", "--domain", path, "--equal-area"])
        self.assertEqual(result.exit_code, status.EXIT_OK)
        header, rows = read_csv(result.stdout)
        self.assertEqual(header, CSV_COLUMNS)
        self.assertEqual([row[0] for row in rows], ["T4-panharmonic", "T5-harmonic", "T2-unweighted", "T4-certificate"])
        self.assertEqual(rows[-1][-1], "consistent-with-disc")

    def test_characterize_square(self):
        """It should find the unit square not to be a disc and exit 3"""
        path = self.domain_file(SQUARE)
        result = self.runner.invoke(args=["characterize", "--domain", path, "--equal-area", "--format", "json"])
        self.assertEqual(result.exit_code, status.EXIT_NOT_A_DISC)
        records = json.loads(result.stdout)
        self.assertEqual(records[-1]["conclusion"], "not-a-disc")
        self.assertLess(records[-1]["residual"], 0.0)

    def test_characterize_given_radius(self):
        """It should skip the unweighted residual when r is given"""
        path = self.domain_file(SQUARE)
        result = self.runner.invoke(args=["characterize", "--domain", path, "--r", "0.4", "--mu", "2"])
        self.assertEqual(result.exit_code, status.EXIT_NOT_A_DISC)
        _, rows = read_csv(result.stdout)
        self.assertEqual([row[0] for row in rows], ["T4-panharmonic", "T5-harmonic", "T4-certificate"])

    def test_characterize_radius_too_large(self):
        """It should exit 2 when pi r^2 exceeds the area"""
        path = self.domain_file(DISC)
        result = self.runner.invoke(args=["characterize", "--domain", path, "--r", "1.5"])
        self.assertEqual(result.exit_code, status.EXIT_CONFIG_ERROR)

    def test_characterize_radius_options(self):
        """It should require exactly one of --r and --equal-area"""
        path = self.domain_file(DISC)
        self.assertEqual(self.runner.invoke(args=["characterize", "--domain", path]).exit_code, status.EXIT_CONFIG_ERROR)
        result = self.runner.invoke(args=["characterize", "--domain", path, "--r", "1", "--equal-area"])
        self.assertEqual(result.exit_code, status.EXIT_CONFIG_ERROR)

    def test_characterize_bad_files(self):
        """It should exit 2 for missing or malformed domain files"""
        missing = os.path.join(self.tmpdir.name, "missing.json")
        self.assertEqual(
            self.runner.invoke(args=["characterize", "--domain", missing, "--equal-area"]).exit_code, status.EXIT_CONFIG_ERROR
        )
        path = self.domain_file({"type": "ellipse"})
        self.assertEqual(
            self.runner.invoke(args=["characterize", "--domain", path, "--equal-area"]).exit_code, status.EXIT_CONFIG_ERROR
        )

    def test_characterize_sign_changing_field(self):
        """It should exit 2 for a field that is not positive panharmonic"""
        path = self.domain_file(DISC)
        result = self.runner.invoke(args=["characterize", "--domain", path, "--r", "1", "--field", "plane-hh:lambda=1"])
        self.assertEqual(result.exit_code, status.EXIT_CONFIG_ERROR)

    ######################################################################
    #  R E C O V E R
    ######################################################################

    def test_recover_disc(self):
        """It should recover the disc of a disc file from a displaced start"""
        path = self.domain_file({"type": "disc", "center": [0.3, -0.2], "radius": 0.8})
        args = ["recover", "--domain", path, "--center-x", "0.1", "--center-y", "0", "--init-r", "0.5"]
        result = self.runner.invoke(args=args)
        self.assertEqual(result.exit_code, status.EXIT_OK)
        header, rows = read_csv(result.stdout)
        self.assertEqual(header[:3], ["center_x1", "center_x2", "radius"])
        self.assertAlmostEqual(float(rows[0][0]), 0.3, delta=1e-6)
        self.assertAlmostEqual(float(rows[0][1]), -0.2, delta=1e-6)
        self.assertAlmostEqual(float(rows[0][2]), 0.8, delta=1e-6)
        self.assertGreater(int(rows[0][4]), 0)
        self.assertEqual(rows[0][-1], "true")

    def test_recover_square(self):
        """It should fit a square with a disc no larger than its area allows and keep a residual"""
        result = self.runner.invoke(args=["recover", "--domain", self.domain_file(SQUARE)])
        self.assertEqual(result.exit_code, status.EXIT_OK)
        _, rows = read_csv(result.stdout)
        self.assertLessEqual(float(rows[0][2]), math.sqrt(1.0 / math.pi) + 1e-12)
        self.assertGreater(float(rows[0][3]), 1e-4)
        self.assertEqual(rows[0][-1], "true")

    @patch("discmeans.characterize.recover_disc")
    def test_recover_nonconvergence(self, recover_mock):
        """It should exit 5 when the fit runs out of iterations"""
        recover_mock.return_value = RecoveryResult(Point(0.0, 0.0), 1.0, 0.1, iterations=3, converged=False)
        path = self.domain_file(DISC)
        args = ["recover", "--domain", path, "--max-iter", "3", "--center-x", "0.1", "--center-y", "0"]
        result = self.runner.invoke(args=args)
        self.assertEqual(result.exit_code, status.EXIT_NONCONVERGENCE)
        _, kwargs = recover_mock.call_args
        self.assertEqual(kwargs["max_iter"], 3)
        self.assertEqual(kwargs["init"][0], Point(0.1, 0.0))
