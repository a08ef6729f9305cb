import functools

import pytest

from ordfix import GeneratorParams, builtin_library, gen_theorem_instance

TARGETS = ("T1", "T2", "T3", "T4", "C1", "C2", "T6", "T7", "T8", "T9")

ACCEPTANCE_LINES = []


def record_acceptance(number, ok, detail):
    ACCEPTANCE_LINES.append((number, ok, detail))


@functools.lru_cache(maxsize=None)
def generated_corpus(per_target=24):
    specs = []
    for target in TARGETS:
        for seed in range(per_target):
            params = GeneratorParams(
                seed=seed,
                n=1 + seed % 8,
                target=target,
                quasi=target not in ("T1", "T2", "T3", "C2", "T7") and seed % 2 == 1,
                gauge="rational" if seed % 3 == 0 else "linear",
            )
            specs.append(gen_theorem_instance(params))
    return tuple(specs)


@functools.lru_cache(maxsize=None)
def full_corpus():
    return tuple(builtin_library()) + generated_corpus()


@pytest.fixture(scope="session")
def corpus():
    return full_corpus()


@pytest.fixture(scope="session")
def finite_corpus():
    return tuple(s for s in full_corpus() if hasattr(s.space, "dist"))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
