import sys

import hypothesis

hypothesis.settings.register_profile(
    "package", deadline=None, max_examples=60,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("package")


def pytest_terminal_summary(terminalreporter):
    # replay the acceptance one-liners where capture cannot swallow them
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "SUMMARY_LINES", None)
    if lines:
        terminalreporter.section("acceptance summary")
        for line in lines:
            terminalreporter.write_line(line)
