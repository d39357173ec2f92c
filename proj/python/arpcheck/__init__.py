# Copyright (C) 2026 The arpcheck Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Runtime permission misuse checker for AIR app models."""

import json

from . import _arpcheck
from ._arpcheck import AirError, ConfigError, MappingError, format_app, metrics

__all__ = [
    "AirError",
    "ConfigError",
    "MappingError",
    "analyze",
    "diff_levels",
    "format_app",
    "metrics",
    "parse_stubs",
    "reachable_rvs",
]


def analyze(app_text, mappings, config_text="", verbose=False):
    """Analyze AIR source against a mapping directory; returns the report dict."""
    return json.loads(_arpcheck.analyze(app_text, str(mappings), config_text, verbose))


def diff_levels(mappings, from_level, to_level):
    return json.loads(_arpcheck.diff_levels(str(mappings), from_level, to_level))


def parse_stubs(text, level):
    return json.loads(_arpcheck.parse_stubs(text, level))


def reachable_rvs(app_text, site, lav=30):
    return set(_arpcheck.reachable_rvs(app_text, site, lav))
