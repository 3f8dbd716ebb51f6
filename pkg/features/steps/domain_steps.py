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
Domain Steps

Steps file for discmeans.feature: writes domain files for the scenarios
"""
import os

from behave import given  # pylint: disable=no-name-in-module
from compare3 import expect
from flask import json

from discmeans.geometry import load_domain


def _numbers(text):
    return [float(item) for item in text.split()]


def _domain(row):
    """Builds the domain file object for one table row"""
    kind = row["type"]
    if kind == "disc":
        return {"type": "disc", "center": _numbers(row["center"]), "radius": float(row["size"])}
    if kind == "square":
        cx, cy = _numbers(row["center"])
        half = 0.5 * float(row["size"])
        corners = [[cx - half, cy - half], [cx + half, cy - half], [cx + half, cy + half], [cx - half, cy + half]]
        return {"type": "polygon", "anchor": [cx, cy], "vertices": corners}
    if kind == "star":
        harmonics = _numbers(row.get("harmonics", "") or "")
        return {"type": "star", "center": _numbers(row["center"]), "c0": float(row["size"]), "cos": harmonics}
    raise ValueError(f"Unknown domain type in table: {kind}")


@given("the following domains")
def step_impl(context):
    """Write one domain file per table row"""
    for row in context.table:
        path = os.path.join(context.workdir, f"{row['name']}.json")
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(json.dumps(_domain(row)))
        # the file must load before any command sees it
        expect(load_domain(path).area() > 0.0).to_be(True)
        context.domains[row["name"]] = path
