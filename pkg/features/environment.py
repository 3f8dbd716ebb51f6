"""
Environment for Behave Testing
"""

import logging
import shutil
import tempfile
from os import getenv

from discmeans import create_app

LOGGING_LEVEL = getenv("BEHAVE_LOGGING_LEVEL", "CRITICAL").upper()


def before_all(context):
    """Executed once before all tests"""
    context.app = create_app()
    context.app.logger.setLevel(getattr(logging, LOGGING_LEVEL, logging.CRITICAL))
    context.config.setup_logging()


def before_scenario(context, scenario):  # pylint: disable=unused-argument
    """Gives every scenario a fresh runner and a scratch directory for domain files"""
    context.runner = context.app.test_cli_runner()
    context.workdir = tempfile.mkdtemp(prefix="discmeans-")
    context.domains = {}


def after_scenario(context, scenario):  # pylint: disable=unused-argument
    """Removes the scratch directory"""
    shutil.rmtree(context.workdir, ignore_errors=True)
