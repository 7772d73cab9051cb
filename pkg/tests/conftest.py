import time
from dataclasses import dataclass
from importlib import resources

import pytest
from hypothesis import strategies as st

from cnd.generator import gen_deduction
from cnd.logic import And, Atom, Bot, Exists, Forall, Imp, Not, Or, Param, Var
from cnd.reduce import normalize
from cnd.syntax import parse_deduction, parse_formula

FIXTURES = resources.files("cnd") / "fixtures"
CORPUS_SIZE = 1000
CORPUS_BUDGET = 40


def load_fixture(name):
    return parse_deduction((FIXTURES / (name + ".cnd")).read_bytes())


def fixture_names():
    return sorted(p.name[:-4] for p in FIXTURES.iterdir() if p.name.endswith(".cnd"))


F = parse_formula
D = parse_deduction


@dataclass
class Item:
    seed: int
    system: str
    d: object
    nf: object = None
    trace: list = None
    error: Exception = None


@dataclass
class Corpus:
    items: list
    seconds: float


_corpus_cache = {}


def build_corpus(n=CORPUS_SIZE, budget=CORPUS_BUDGET):
    key = (n, budget)
    if key not in _corpus_cache:
        start = time.perf_counter()
        items = []
        for system in ("c", "cex"):
            for seed in range(n):
                it = Item(seed, system, gen_deduction(seed, budget, system))
                try:
                    it.nf, it.trace = normalize(it.d, system=system)
                except Exception as e:  # recorded; the acceptance tests count these
                    it.error = e
                items.append(it)
        _corpus_cache[key] = Corpus(items, time.perf_counter() - start)
    return _corpus_cache[key]


@pytest.fixture(scope="session")
def corpus():
    return build_corpus()


# ------------------------------------------------------------- strategies

names = st.sampled_from(["p", "q", "r"])
params_ = st.sampled_from(["a", "b", "c"])


def formulas(quantifiers=True, max_leaves=8):
    atom = st.one_of(names.map(Atom), params_.map(lambda a: Atom("F", (Param(a),))), st.just(Bot()))

    def extend(inner):
        opts = [inner.map(Not), st.tuples(inner, inner).map(lambda t: And(*t)),
                st.tuples(inner, inner).map(lambda t: Or(*t)),
                st.tuples(inner, inner).map(lambda t: Imp(*t))]
        if quantifiers:
            opts.append(inner.map(lambda f: Exists("x", Or(Atom("F", (Var("x"),)), f))))
            opts.append(inner.map(lambda f: Forall("x", And(f, Atom("F", (Var("x"),))))))
        return st.one_of(*opts)

    return st.recursive(atom, extend, max_leaves=max_leaves)


# -------------------------------------------------- acceptance reporting

_acceptance = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" in report.nodeid and report.when == "call":
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line("%s %s" % ("PASS" if outcome == "passed" else "FAIL", name))
