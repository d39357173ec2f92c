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

import os
from pathlib import Path

import pytest

import arpcheck

ROOT = Path(os.environ.get("ARPCHECK_SOURCE_DIR", Path(__file__).resolve().parents[2]))
CORPUS = ROOT / "corpus"
MAPPINGS = CORPUS / "mappings"

GUARDED = """app com.example.py targetSdk 28
activity Main {
  onCreate = main
}
method main() {
  block entry:
    branch sdk >= 29 modern legacy
  block modern:
    dangerous <android.hardware.Camera.open()>()
    return
  block legacy:
    return
}
"""


def read(name):
    return (CORPUS / "apps" / name).read_text()


def test_buggy_fixture_is_flagged():
    report = arpcheck.analyze(read("unchecked_launch_buggy.air"), MAPPINGS)
    assert len(report["findings"]) == 1
    finding = report["findings"][0]
    assert finding["kind"] == "type1"
    assert finding["component"].endswith("SettingsActivity")


def test_patched_fixture_is_clean():
    report = arpcheck.analyze(read("unchecked_launch_patched.air"), MAPPINGS)
    assert report["findings"] == []


def test_verbose_shows_suppressed_findings():
    text = read("trycatch_patched.air")
    assert arpcheck.analyze(text, MAPPINGS)["findings"] == []
    verbose = arpcheck.analyze(text, MAPPINGS, verbose=True)["findings"]
    assert [f["suppressed_by"] for f in verbose] == ["trycatch"]


def test_type2_levels():
    report = arpcheck.analyze(read("device_id_restricted_buggy.air"), MAPPINGS)
    assert [(f["kind"], f["levels"]) for f in report["findings"]] == [("type2", [29, 30])]


def test_metrics():
    precision, recall, f1 = arpcheck.metrics(26, 32, 3, 9)
    assert round(precision * 100, 2) == 89.66
    assert round(recall * 100, 2) == 74.29
    assert round(f1 * 100, 2) == 81.25
    assert arpcheck.metrics(0, 5, 0, 0) == (None, None, None)


def test_diff_levels_lists_the_restricted_api():
    diff = arpcheck.diff_levels(MAPPINGS, 28, 29)
    assert "android.telephony.TelephonyManager.getDeviceId()" in str(diff)
    with pytest.raises(arpcheck.MappingError):
        arpcheck.diff_levels(MAPPINGS, 28, 31)


def test_parse_stubs():
    mapping = arpcheck.parse_stubs((CORPUS / "stubs" / "telephony-29.java").read_text(), 29)
    assert "android.telephony.TelephonyManager.getDeviceId()" in mapping["apis"]


def test_reachable_rvs():
    assert arpcheck.reachable_rvs(GUARDED, "main:modern:0") == {29, 30}


def test_format_app_is_stable():
    text = arpcheck.format_app(read("wrapper_literal_buggy.air"))
    assert arpcheck.format_app(text) == text


def test_errors_are_raised():
    with pytest.raises(arpcheck.AirError):
        arpcheck.format_app("app com.example.bad targetSdk 22\n")
    with pytest.raises(arpcheck.ConfigError):
        arpcheck.analyze(GUARDED, MAPPINGS, config_text="estimate = sideways\n")
    with pytest.raises(ValueError):
        arpcheck.analyze(GUARDED, "/nonexistent")
