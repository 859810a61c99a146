import pytest

from fsmkit import automata, digits, transducers
from fsmkit.machine import AUTOMATON, build_machine


@pytest.fixture(scope="session")
def naf_acceptor():
    return digits.build_naf_acceptor()


@pytest.fixture(scope="session")
def naf1():
    return digits.build_naf1()


@pytest.fixture(scope="session")
def naf_completed(naf1):
    return transducers.with_final_word_out(naf1, 0)


@pytest.fixture(scope="session")
def naf_all():
    return digits.build_naf_all()


@pytest.fixture(scope="session")
def triple():
    return digits.build_triple()


@pytest.fixture(scope="session")
def combined_3n_n():
    return digits.build_combined_3n_n()


@pytest.fixture(scope="session")
def naf3():
    return digits.build_naf3()


@pytest.fixture(scope="session")
def machine_T():
    return digits.build_T()


@pytest.fixture(scope="session")
def machine_W():
    return digits.build_W()


@pytest.fixture(scope="session")
def machine_R():
    return digits.build_R()


@pytest.fixture(scope="session")
def identity01():
    return transducers.identity_transducer([0, 1])


@pytest.fixture(scope="session")
def weight_naf(naf_completed):
    return transducers.compose(
        transducers.weight_transducer([-1, 0, 1]), naf_completed)


@pytest.fixture(scope="session")
def all_words_acceptor():
    return build_machine(
        [("0", "0", a) for a in (-1, 0, 1)],
        initial_labels=["0"], final_labels=["0"],
        input_alphabet=[-1, 0, 1], kind=AUTOMATON)
