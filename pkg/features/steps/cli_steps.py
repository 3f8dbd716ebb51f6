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
Command Line Steps

Steps file for discmeans.feature: runs the commands and inspects their
exit status and CSV output
"""
import csv
import io
import shlex

from behave import then, when  # pylint: disable=no-name-in-module
from compare3 import expect

EXIT_CODES = {
    "ok": 0,
    "tolerance failure": 1,
    "config error": 2,
    "not a disc": 3,
    "inconclusive": 4,
    "nonconvergence": 5,
}


@when('I run "{command}"')
def step_impl(context, command):
    """Run a command line, substituting domain names with their files"""
    args = [context.domains.get(arg, arg) for arg in shlex.split(command)]
    context.result = context.runner.invoke(args=args)
    context.rows = []
    if context.result.stdout.startswith(("theorem", "identity", "center_x1")):
        context.rows = list(csv.DictReader(io.StringIO(context.result.stdout)))


@then('the command should exit with "{outcome}"')
def step_impl(context, outcome):
    """Check the exit status"""
    expect(context.result.exit_code).to_equal(EXIT_CODES[outcome])


@then("every row should pass")
def step_impl(context):
    """Check the passed column of an identity report"""
    expect(len(context.rows) > 0).to_be(True)
    for row in context.rows:
        expect(row["passed"]).to_equal("true")


@then('the "{theorem}" row should conclude "{conclusion}"')
def step_impl(context, theorem, conclusion):
    """Check the conclusion of a report row"""
    rows = [row for row in context.rows if row["theorem"] == theorem]
    expect(len(rows)).to_equal(1)
    expect(rows[0]["conclusion"]).to_equal(conclusion)


@then('the "{theorem}" residual should be negative')
def step_impl(context, theorem):
    """Check the sign of a report residual"""
    rows = [row for row in context.rows if row["theorem"] == theorem]
    expect(len(rows)).to_equal(1)
    expect(float(rows[0]["residual"]) < 0.0).to_be(True)


@then('the recovered "{column}" should be "{value}" within "{tolerance}"')
def step_impl(context, column, value, tolerance):
    """Check one column of the recovery row"""
    expect(len(context.rows)).to_equal(1)
    expect(abs(float(context.rows[0][column]) - float(value)) <= float(tolerance)).to_be(True)


@then('the recovered "{column}" should be at most "{bound}"')
def step_impl(context, column, bound):
    """Check an upper bound on one column of the recovery row"""
    expect(len(context.rows)).to_equal(1)
    expect(float(context.rows[0][column]) <= float(bound)).to_be(True)


@then('the recovered "{column}" should be greater than "{bound}"')
def step_impl(context, column, bound):
    """Check a lower bound on one column of the recovery row"""
    expect(len(context.rows)).to_equal(1)
    expect(float(context.rows[0][column]) > float(bound)).to_be(True)
