"""Munn trees, the bracket semigroup, and the syntax semigroup."""

from __future__ import annotations

import random

from context_algebra.linkgrammar import load_lexicon, track_disjuncts, parse_to_fis
from context_algebra.cli import data_path
from context_algebra.munn import (
    BRACKET_ONE,
    BRACKET_ZERO,
    SyntaxElem,
    _canonicalize,
    bracket_mul,
    bracket_word,
    fis_inverse,
    fis_mul,
    format_bracket,
    format_fis_word,
    invert_word,
    munn_tree,
    parse_fis_word,
    semigroup_algebra_mul,
    semigroup_phi,
)
from context_algebra.riesz import SparseVec

PAPER_WORD = "a a a' b c d b b' a a' d' c' a c"

# the drawn word-tree: R1..R10 with these labelled edges
PAPER_EDGES = [
    ("R1", "a", "R2"),
    ("R2", "a", "R3"),
    ("R2", "b", "R4"),
    ("R4", "c", "R5"),
    ("R5", "d", "R6"),
    ("R6", "b", "R7"),
    ("R6", "a", "R8"),
    ("R4", "a", "R9"),
    ("R9", "c", "R10"),
]

PARSE_WORD = "s s' m o d d' o' m' j d a a' d' j'"


def random_word(rng, length, alphabet="abcd"):
    return [
        (rng.choice(alphabet), rng.choice([1, -1])) for _ in range(length)
    ]


def test_parse_and_format_round_trip():
    word = parse_fis_word(PAPER_WORD)
    assert format_fis_word(word) == PAPER_WORD
    assert word[2] == ("a", -1)


def test_paper_word_tree_matches_drawing():
    tree = munn_tree(PAPER_WORD)
    assert tree.n_nodes == 10
    expected = _canonicalize(set(PAPER_EDGES), "R1", "R10")
    assert tree == expected
    assert not tree.is_idempotent()  # start R1, finish R10 differ


def test_empty_word_is_identity():
    tree = munn_tree([])
    assert tree.n_nodes == 1
    assert tree.is_idempotent()


def test_parse_word_idempotent():
    tree = munn_tree(PARSE_WORD)
    assert tree.is_idempotent()
    assert tree.n_nodes == 8


def test_inverse_swaps_roots():
    tree = munn_tree(PAPER_WORD)
    inv = fis_inverse(tree)
    assert inv.n_nodes == tree.n_nodes
    assert inv == munn_tree(invert_word(parse_fis_word(PAPER_WORD)))
    assert fis_inverse(inv) == tree


def test_xxinvx_law_500_random_words():
    rng = random.Random(12)
    for _ in range(500):
        word = random_word(rng, rng.randint(1, 8))
        x = munn_tree(word)
        xxx = fis_mul(fis_mul(x, fis_inverse(x)), x)
        assert xxx == x


def test_inverse_law():
    rng = random.Random(13)
    for _ in range(200):
        word = random_word(rng, rng.randint(1, 8))
        x = munn_tree(word)
        xi = fis_inverse(x)
        assert fis_mul(fis_mul(xi, x), xi) == xi


def test_product_agrees_with_concatenation():
    rng = random.Random(14)
    for _ in range(200):
        u = random_word(rng, rng.randint(0, 6))
        v = random_word(rng, rng.randint(0, 6))
        assert fis_mul(munn_tree(u), munn_tree(v)) == munn_tree(u + v)


def test_canonical_form_invariant_under_fis_rewrites():
    """w and w[:i] (w[i:] w[i:]^-1 w[i:]) are equal elements; their trees
    must coincide."""
    rng = random.Random(15)
    for _ in range(200):
        word = random_word(rng, rng.randint(1, 8))
        i = rng.randint(0, len(word))
        suffix = word[i:]
        rewritten = word[:i] + suffix + invert_word(suffix) + suffix
        assert munn_tree(rewritten) == munn_tree(word)
        prefix = word[:i]
        rewritten2 = prefix + invert_word(prefix) + prefix + word[i:]
        assert munn_tree(rewritten2) == munn_tree(word)


def test_idempotents_square_to_themselves():
    rng = random.Random(16)
    seen = 0
    for _ in range(400):
        word = random_word(rng, rng.randint(1, 6))
        tree = munn_tree(word)
        if tree.is_idempotent():
            assert fis_mul(tree, tree) == tree
            seen += 1
    assert seen > 10


def test_dot_and_json_output():
    tree = munn_tree("a b'")
    dot = tree.to_dot()
    assert "shape=box" in dot
    assert "peripheries=2" in dot
    payload = tree.to_json_dict()
    assert payload["nodes"] == tree.n_nodes
    assert len(payload["edges"]) == 2


# -- bracket semigroup --------------------------------------------------------


def test_bracket_contraction():
    d_ann = bracket_word((), ("d",))
    d_cre = bracket_word(("d",), ())
    assert bracket_mul(d_ann, d_cre) == BRACKET_ONE
    a_cre = bracket_word(("a",), ())
    assert bracket_mul(d_ann, a_cre) is BRACKET_ZERO


def test_bracket_identity_and_zero():
    u = bracket_word(("a",), ("b",))
    assert bracket_mul(u, BRACKET_ONE) == u
    assert bracket_mul(BRACKET_ONE, u) == u
    assert bracket_mul(u, BRACKET_ZERO) is BRACKET_ZERO
    assert format_bracket(BRACKET_ZERO) == "0"
    assert format_bracket(BRACKET_ONE) == "1"


def test_bracket_noun_example():
    # <d| (|a>|d> + |d>): the first summand dies, the second gives 1
    d_ann = bracket_word((), ("d",))
    n1 = bracket_word(("a", "d"), ())
    n2 = bracket_word(("d",), ())
    assert bracket_mul(d_ann, n1) is BRACKET_ZERO
    assert bracket_mul(d_ann, n2) == BRACKET_ONE


# -- syntax semigroup -----------------------------------------------------------


def test_syntax_element_example():
    # <<d| * |d>> = ([d d'], 1): nonzero idempotent pair
    d_right = SyntaxElem.from_connector("d", right=True)
    d_left = SyntaxElem.from_connector("d", right=False)
    product = d_right * d_left
    assert not product.is_zero()
    assert product.bracket == BRACKET_ONE
    assert product.tree == munn_tree("d d'")
    # <<d| * |a>>|d>> dies in the bracket component
    a_left = SyntaxElem.from_connector("a", right=False)
    noun = a_left * d_left
    assert (d_right * noun).is_zero()


def test_syntax_zero_absorbs():
    zero = SyntaxElem.zero()
    x = SyntaxElem.from_connector("a", right=True)
    assert (zero * x).is_zero()
    assert (x * zero).is_zero()


def test_syntax_associativity_spot_check():
    rng = random.Random(17)
    connectors = [
        SyntaxElem.from_connector(t, right=r)
        for t in "abc"
        for r in (True, False)
    ]
    for _ in range(100):
        x, y, z = (rng.choice(connectors) for _ in range(3))
        assert (x * y) * z == x * (y * z)


def test_valid_parse_translation_idempotent_and_bracket_one():
    lexicon = load_lexicon(str(data_path("plant.lex")))
    sentence = "they mashed their way through the thick mud".split()
    [(assignment, _)] = track_disjuncts(lexicon, sentence)
    result = parse_to_fis(lexicon, sentence, assignment)
    assert format_fis_word(result["word"]) == PARSE_WORD
    assert result["idempotent"]
    assert result["strict_parse"]
    from context_algebra.linkgrammar import sentence_syntax_element

    element = sentence_syntax_element(lexicon, sentence, assignment)
    assert element.bracket == BRACKET_ONE
    assert element.tree.is_idempotent()


def test_invalid_assignment_not_strict():
    lexicon = load_lexicon(str(data_path("plant.lex")))
    sentence = "they mashed their way through the thick mud".split()
    bad = (0, 0, 0, 0, 0, 0, 0, 0)  # mashed's first disjunct cannot work
    result = parse_to_fis(lexicon, sentence, list(bad))
    assert not result["strict_parse"]
    from context_algebra.linkgrammar import sentence_syntax_element

    element = sentence_syntax_element(lexicon, sentence, list(bad))
    assert element.is_zero() or not element.tree.is_idempotent()


def test_idempotence_does_not_imply_parse():
    # a'a is idempotent but starts with a right-connector translation
    tree = munn_tree("a' a")
    assert tree.is_idempotent()


# -- semigroup algebra -------------------------------------------------------------


def test_semigroup_algebra_expansion():
    def free_mul(x, y):
        return x + y

    u = SparseVec({"a": 2.0, "b": 3.0})
    v = SparseVec({"c": 5.0})
    product = semigroup_algebra_mul(free_mul, u, v)
    assert product == SparseVec({"ac": 10.0, "bc": 15.0})


def test_semigroup_algebra_zero_annihilates():
    def mul(x, y):
        return None if (x, y) == ("a", "b") else x + y

    u = SparseVec({"a": 1.0})
    v = SparseVec({"b": 1.0})
    assert semigroup_algebra_mul(mul, u, v) == SparseVec({})


def test_semigroup_algebra_identity():
    def mul(x, y):
        if x == "1":
            return y
        if y == "1":
            return x
        return x + y

    u = SparseVec({"a": 2.0, "b": -1.0})
    assert semigroup_algebra_mul(mul, u, SparseVec({"1": 1.0})) == u
    assert semigroup_algebra_mul(mul, SparseVec({"1": 1.0}), u) == u
    assert semigroup_phi(u) == 1.0


def test_syntax_semigroup_algebra_convolution():
    """Convolution over canonical syntax-element keys."""
    elems = {}

    def register(e):
        elems[e.key()] = e
        return e.key()

    d_right = register(SyntaxElem.from_connector("d", right=True))
    d_left = register(SyntaxElem.from_connector("d", right=False))
    a_left = register(SyntaxElem.from_connector("a", right=False))

    def mul(x, y):
        product = elems[x] * elems[y]
        if product.is_zero():
            return None
        register(product)
        return product.key()

    noun = SparseVec({a_left: 1.0}) + SparseVec({d_left: 1.0})
    det = SparseVec({d_right: 1.0})
    result = semigroup_algebra_mul(mul, det, noun)
    # <<d| |d>> survives; <<d| |a>> collapses to zero and is discarded
    assert len(result) == 1
    [(key, value)] = list(result.items())
    assert value == 1.0
    assert elems[key].tree == munn_tree("d d'")


def test_random_parses_translate_to_idempotents():
    """Every valid parse of random sentences gives an idempotent FIS
    element whose bracket component reduces to 1."""
    from context_algebra.errors import NoParse
    from context_algebra.linkgrammar import (
        sentence_syntax_element,
        track_disjuncts,
    )
    from tests.test_linkgrammar import random_lexicon

    rng = random.Random(31)
    lexicon = random_lexicon(rng, n_words=3)
    words = sorted(lexicon.entries)
    parses_seen = 0
    for _ in range(300):
        sentence = [rng.choice(words) for _ in range(rng.randint(1, 5))]
        try:
            assignments = track_disjuncts(lexicon, sentence)
        except NoParse:
            continue
        for assignment, _ in assignments:
            result = parse_to_fis(lexicon, sentence, list(assignment))
            assert result["idempotent"]
            assert result["strict_parse"]
            element = sentence_syntax_element(lexicon, sentence, list(assignment))
            assert element.bracket == BRACKET_ONE
            parses_seen += 1
    assert parses_seen > 20


def test_semigroup_algebra_full_bilinear_expansion():
    # (2e_a + 3e_b)(5e_c + 7e_d) distributes over all four pairs
    def free_mul(x, y):
        return x + y

    u = SparseVec({"a": 2.0, "b": 3.0})
    v = SparseVec({"c": 5.0, "d": 7.0})
    assert semigroup_algebra_mul(free_mul, u, v) == SparseVec(
        {"ac": 10.0, "ad": 14.0, "bc": 15.0, "bd": 21.0}
    )
