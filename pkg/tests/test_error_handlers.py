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
Error Handler Test Suite

Test cases for the exception to exit-code mapping
"""
import logging
from unittest import TestCase

import click

from discmeans import create_app
from discmeans.common import status
from discmeans.common.error_handlers import HANDLERS, dispatch, handle_errors
from discmeans.models import ArgumentDomainError, ComputationError, DataValidationError, HypothesisError


######################################################################
#  E R R O R   H A N D L E R   T E S T   C A S E S
######################################################################
class TestErrorHandlers(TestCase):
    """Error Handler Tests"""

    @classmethod
    def setUpClass(cls):
        cls.app = create_app()
        cls.app.logger.setLevel(logging.CRITICAL)

    def setUp(self):
        self.context = self.app.app_context()
        self.context.push()

    def tearDown(self):
        self.context.pop()

    def test_registered_classes(self):
        """It should register a handler for each package exception"""
        self.assertEqual(set(HANDLERS), {DataValidationError, HypothesisError, ComputationError})

    def test_subclass_uses_parent_handler(self):
        """It should map ArgumentDomainError through its DataValidationError parent"""
        self.assertNotIn(ArgumentDomainError, HANDLERS)
        self.assertEqual(dispatch(ArgumentDomainError("r must be positive")), status.EXIT_CONFIG_ERROR)

    def test_exit_codes(self):
        """It should map each exception onto its exit code"""
        self.assertEqual(dispatch(DataValidationError("bad file")), status.EXIT_CONFIG_ERROR)
        self.assertEqual(dispatch(HypothesisError("area too small")), status.EXIT_CONFIG_ERROR)
        self.assertEqual(dispatch(ComputationError("non-finite value")), status.EXIT_TOLERANCE_FAILURE)

    def test_handle_errors_exits(self):
        """It should turn a handled exception into a click Exit with its code"""

        @handle_errors
        def failing():
            raise ComputationError("non-finite value")

        with self.assertRaises(click.exceptions.Exit) as context:
            failing()
        self.assertEqual(context.exception.exit_code, status.EXIT_TOLERANCE_FAILURE)
        self.assertIsInstance(context.exception.__cause__, ComputationError)

    def test_handle_errors_passes_results(self):
        """It should return the command's value when nothing is raised"""

        @handle_errors
        def succeeding(value):
            return value * 2

        self.assertEqual(succeeding(21), 42)

    def test_unhandled_errors_propagate(self):
        """It should let exceptions without a handler through"""

        @handle_errors
        def failing():
            raise ValueError("not a package error")

        with self.assertRaises(ValueError):
            failing()
