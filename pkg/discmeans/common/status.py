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
Descriptive process exit codes, for code readability.

Shell pipelines and CI jobs branch on these values; the three certificate
outcomes of ``characterize`` map onto EXIT_OK, EXIT_NOT_A_DISC and
EXIT_INCONCLUSIVE.
"""

# Success
EXIT_OK = 0

# A verified identity or convergence target missed its tolerance,
# or an internal numerical fault
EXIT_TOLERANCE_FAILURE = 1

# Invalid configuration, input file, or theorem hypothesis
EXIT_CONFIG_ERROR = 2

# Sign certificate outcomes
EXIT_NOT_A_DISC = 3
EXIT_INCONCLUSIVE = 4

# Disc recovery ran out of iterations
EXIT_NONCONVERGENCE = 5
