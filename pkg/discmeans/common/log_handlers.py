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
Log Handlers

This module contains utility functions to set up logging
consistently
"""
import logging
import sys


def init_logging(app, level: int):
    """Set up logging for the command line: records go to stderr, data to stdout"""
    app.logger.propagate = False
    handler = logging.StreamHandler(sys.stderr)
    # Make all log formats consistent
    handler.setFormatter(
        logging.Formatter("[%(asctime)s] [%(levelname)s] [%(module)s] %(message)s", "%Y-%m-%d %H:%M:%S %z")
    )
    app.logger.handlers = [handler]
    app.logger.setLevel(level)
    app.logger.debug("Logging handler established")
