import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from sessequiv import Ident, build_grammar, parse_signature, parse_type, to_gnf  # noqa: E402

# fixed example streams keep the suite reproducible
settings.register_profile("repro", derandomize=True, print_blob=True)
settings.load_profile("repro")

STREAM_SIG = """\
T = !V;W
U = !(V;V);W
V = +{go: skip}
W = +{go: W}
"""

TREE_SIG = "InputTree = +{Node: InputTree;!(?int);InputTree, Leaf: skip}"

SEND = "all[T] 0 -> all[S] !1;0 -> 0"
SEND_PRIME = "all[T] all[S] 1 -> !1;0 -> 0"


@pytest.fixture(scope="session")
def stream_sig():
    return parse_signature(STREAM_SIG)


@pytest.fixture(scope="session")
def stream_grammar(stream_sig):
    """Shared grammar for T and U, with their start nonterminals."""
    g = to_gnf(build_grammar(Ident("T"), stream_sig, also=[Ident("U")]))
    return g, g.nonterminal_for(Ident("T")), g.nonterminal_for(Ident("U"))


@pytest.fixture(scope="session")
def tree_sig():
    return parse_signature(TREE_SIG)


@pytest.fixture
def send_pair():
    return parse_type(SEND), parse_type(SEND_PRIME)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
