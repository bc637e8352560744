import pytest

from analogybench.formula import FormulaError, atom_names, parse, unparse


def test_atom():
    assert parse("R") == ("atom", "R")


def test_precedence_and_binds_tighter():
    assert parse("a & b | c") == ("or", ("and", ("atom", "a"), ("atom", "b")), ("atom", "c"))
    assert parse("a | b & c") == ("or", ("atom", "a"), ("and", ("atom", "b"), ("atom", "c")))


def test_negation_and_parens():
    assert parse("!a & b") == ("and", ("not", ("atom", "a")), ("atom", "b"))
    assert parse("!(a | b)") == ("not", ("or", ("atom", "a"), ("atom", "b")))
    assert parse("!!a") == ("not", ("not", ("atom", "a")))


def test_atom_names():
    assert atom_names(parse("a & (b | !c)")) == {"a", "b", "c"}


def test_unparse_round_trip():
    for text in ["a", "!a", "a & b | c", "!(a | b) & c"]:
        node = parse(text)
        assert parse(unparse(node)) == node


@pytest.mark.parametrize("bad", ["", "a &", "& a", "(a", "a)", "a ? b", "a b"])
def test_rejects_malformed(bad):
    with pytest.raises(FormulaError):
        parse(bad)
