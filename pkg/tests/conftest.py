"""Optional data files and the per-criterion acceptance summary."""

import os
from pathlib import Path

import pytest

DATA_OPTIONS = {
    "f_table": ("--f-table", "CRYPTOBENCH_F_TABLE", "512-value f table, one integer per line"),
    "jpeg_corpus": ("--jpeg-corpus", "CRYPTOBENCH_JPEG_CORPUS", "official quantized-matrix corpus"),
    "gcm_task1": ("--gcm-task1", "CRYPTOBENCH_GCM_TASK1", "directory of <k>.message records"),
    "gcm_task2": ("--gcm-task2", "CRYPTOBENCH_GCM_TASK2", "directory of <k>.message records"),
    "gcm_task3": ("--gcm-task3", "CRYPTOBENCH_GCM_TASK3", "directory of <k>.message records"),
}


def pytest_addoption(parser):
    group = parser.getgroup("cryptobench data")
    for key, (flag, env, help_) in DATA_OPTIONS.items():
        group.addoption(flag, dest=key, default=os.environ.get(env), help=f"{help_} (or ${env})")


def pytest_configure(config):
    config._criteria = {}


@pytest.fixture
def data_file(request):
    def get(key: str) -> Path:
        value = request.config.getoption(key)
        if not value:
            pytest.skip(f"data-gated: pass {DATA_OPTIONS[key][0]} to run")
        return Path(value)
    return get


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and (report.failed or report.skipped)):
        return
    crit = getattr(report, "_criterion", None)
    if crit is None:
        return
    number, title = crit
    entry = report._config_criteria.setdefault(number, {"title": title, "pass": 0, "fail": 0, "skip": 0})
    entry["fail" if report.failed else "skip" if report.skipped else "pass"] += 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None:
        rep._criterion = tuple(marker.args)
        rep._config_criteria = item.config._criteria


def pytest_terminal_summary(terminalreporter, config):
    crits = config._criteria
    if not crits:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(crits):
        e = crits[number]
        status = "FAIL" if e["fail"] else "PASS" if e["pass"] else "SKIPPED"
        detail = f"{e['pass']} passed, {e['fail']} failed, {e['skip']} skipped"
        terminalreporter.write_line(f"criterion {number:>2} {status:<7} {e['title']} ({detail})")
