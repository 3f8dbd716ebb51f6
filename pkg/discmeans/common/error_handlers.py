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
Module: error_handlers

Maps the package exceptions onto process exit codes. Handlers are
registered per exception class and looked up along the exception's MRO, so
ArgumentDomainError falls back to the DataValidationError handler.
"""
import functools

import click
from flask import current_app as app

from discmeans.models import ComputationError, DataValidationError, HypothesisError
from . import status

HANDLERS = {}


def errorhandler(exception_class):
    """Registers the decorated function as the handler for exception_class"""

    def register(function):
        HANDLERS[exception_class] = function
        return function

    return register


def dispatch(error: Exception) -> int:
    """Runs the handler registered for error and returns its exit code

    Only called by handle_errors, which catches registered classes alone.
    """
    handler = next(HANDLERS[klass] for klass in type(error).__mro__ if klass in HANDLERS)
    return handler(error)


def handle_errors(command):
    """Wraps a CLI command so handled exceptions end the process with their exit code"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except tuple(HANDLERS) as error:
            raise click.exceptions.Exit(dispatch(error)) from error

    return wrapper


######################################################################
# Error Handlers
######################################################################
@errorhandler(DataValidationError)
def request_validation_error(error):
    """Handles malformed input files, descriptors and flags"""
    return config_error(error)


@errorhandler(HypothesisError)
def hypothesis_error(error):
    """Handles theorem hypotheses that do not hold for the given input"""
    app.logger.warning("Hypothesis not satisfied: %s", error)
    return status.EXIT_CONFIG_ERROR


@errorhandler(ComputationError)
def internal_error(error):
    """Handles internal numerical faults"""
    app.logger.error("Computation failed: %s", error)
    return status.EXIT_TOLERANCE_FAILURE


def config_error(error):
    """Handles bad configuration with EXIT_CONFIG_ERROR"""
    app.logger.warning(str(error))
    return status.EXIT_CONFIG_ERROR
