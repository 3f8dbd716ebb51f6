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

"""
Package: discmeans
Mean value identities for panharmonic, harmonic and Helmholtz functions on
discs, and their use for telling discs apart from other planar domains.

This module creates and configures the Flask app that carries the
configuration, the logger and the command line.
"""
from flask import Flask

from discmeans import config
from discmeans.common import cli_commands, log_handlers


############################################################
# Initialize the Flask instance
############################################################
def create_app():
    """Initialize the core application."""
    app = Flask(__name__)
    app.config.from_object(config)

    # Set up logging before anything computes
    log_handlers.init_logging(app, app.config["LOGGING_LEVEL"])

    cli_commands.init_app(app)

    app.logger.debug(70 * "*")
    app.logger.debug("  D I S C M E A N S   R E A D Y  ".center(70, "*"))
    app.logger.debug(70 * "*")

    return app
