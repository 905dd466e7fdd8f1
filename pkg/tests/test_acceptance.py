"""Acceptance suite: one test per release criterion, each printing a
PASS line with its number when its assertions hold at the stated
tolerances."""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from fractions import Fraction

import numpy as np

from context_algebra import corpus as corpus_mod
from context_algebra import entail as entail_mod
from context_algebra import linkgrammar as lg
from context_algebra import logic as logic_mod
from context_algebra import munn as munn_mod
from context_algebra import taxonomy as tax_mod
from context_algebra import topics as topics_mod
from context_algebra.cli import data_path, main
from context_algebra.riesz import EXACT, SparseVec

from tests.test_linkgrammar import oracle_parse_data, random_lexicon
from tests.test_logic import random_form, random_language
from tests.test_munn import PAPER_EDGES, PAPER_WORD, PARSE_WORD
from tests.test_taxonomy import random_tree
from tests.test_topics import FRUIT, FRUIT_RANK2


def report(number, label):
    print("ACCEPTANCE %02d %s: PASS" % (number, label))


def test_c01_lsa_reproduction():
    start = time.perf_counter()
    result = topics_mod.lsa_truncate(topics_mod.CountMatrix(FRUIT), 2)
    elapsed = time.perf_counter() - start
    s1, s2 = result["singular_values"]
    assert abs(s1 - 12.8) <= 0.05
    assert abs(s2 - 9.46) <= 0.05
    assert np.max(np.abs(result["approx"] - np.array(FRUIT_RANK2))) <= 0.02
    assert elapsed < 1.0
    report(1, "LSA reproduction")


def test_c02_context_algebra_products():
    model = corpus_mod.CorpusModel(
        {
            ("a", "b", "c", "d"): Fraction(1, 3),
            ("a", "e", "c", "d"): Fraction(1, 3),
            ("a", "b", "f", "d"): Fraction(1, 3),
        },
        mode=EXACT,
    )
    basis = corpus_mod.choose_basis(model, model.substrings())
    b = model.context_vector(["b"]).vec
    c = model.context_vector(["c"]).vec
    e = model.context_vector(["e"]).vec
    f = model.context_vector(["f"]).vec
    assert basis.product(b, c) == SparseVec(
        {corpus_mod.pair_label(("a",), ("d",)): Fraction(1, 3)}, EXACT
    )
    assert basis.product(e, f) == SparseVec({}, EXACT)

    fmodel = corpus_mod.CorpusModel(
        {
            ("a", "b", "c", "d"): 1 / 3,
            ("a", "e", "c", "d"): 1 / 3,
            ("a", "b", "f", "d"): 1 / 3,
        },
        mode="float",
    )
    basis1 = corpus_mod.choose_basis(fmodel, fmodel.substrings())
    basis2 = corpus_mod.AlgebraBasis(fmodel, [("b",), ("c",), ("e",), ("f",)])
    assert basis1.strings != basis2.strings
    u = fmodel.context_vector(["b"]).vec + fmodel.context_vector(["c"]).vec
    v = fmodel.context_vector(["c"]).vec
    p1, p2 = basis1.product(u, v), basis2.product(u, v)
    assert p1.support(), "product should be non-zero"
    assert max(
        abs(p1[k] - p2[k]) for k in set(p1.support()) | set(p2.support())
    ) < 1e-9
    report(2, "context algebra products")


def test_c03_entailment_contract():
    from tests.test_corpus import random_model

    start = time.perf_counter()
    rng = random.Random(1234)
    for _ in range(200):
        model = random_model(rng, max_docs=5, max_len=5)
        strings = [("a",), ("b",), ("c",), ("a", "b")]
        for x in strings:
            xv = model.context_vector(x).vec
            if model.phi(xv) == 0:
                continue
            assert model.entailment(x, x) == 1
            for y in strings:
                value = model.entailment(x, y)
                assert 0 <= value <= 1
                if xv <= model.context_vector(y).vec:
                    assert value == 1
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report(3, "degree-of-entailment contract (%.2fs)" % elapsed)


def test_c04_subsequence_characterization():
    from tests.test_entail import is_subsequence

    alphabet = ("a", "b")
    strings = [()]
    for n in range(1, 5):
        strings += list(itertools.product(alphabet, repeat=n))
    for x in strings:
        for y in strings:
            value = entail_mod.subseq_entail(x, y, EXACT)
            assert (value == 1) == is_subsequence(x, y)
    report(4, "subsequence entailment iff subsequence")


def test_c05_document_projections_match_scan():
    rng = random.Random(4321)
    vocab = "abcdefghij"
    for _ in range(100):
        docs = [
            [rng.choice(vocab) for _ in range(rng.randint(1, 8))]
            for _ in range(rng.randint(1, 20))
        ]
        collection = entail_mod.DocumentCollection(docs)
        x = [rng.choice(docs[rng.randrange(len(docs))])[0]]
        y = [rng.choice(vocab), rng.choice(vocab)]
        need_x, need_xy = set(x), set(x) | set(y)
        n_x = sum(1 for d in docs if need_x <= set(d))
        n_xy = sum(1 for d in docs if need_xy <= set(d))
        if n_x == 0:
            continue
        assert entail_mod.docproj_entail(collection, x, y) == n_xy / n_x
    report(5, "document projections equal the document scan")


def test_c06_propositional_identities():
    for atoms in (1, 2, 3):
        result = logic_mod.prop_projection_identities(atoms)
        assert result["ok"], result
    report(6, "propositional projection identities")


def test_c07_entailment_bound():
    rng = random.Random(555)
    done = single = 0
    while done < 100:
        atoms = rng.choice([1, 2, 3])
        if atoms == 3:
            language = logic_mod.PropositionalLanguage.uniform(3)
        else:
            language = random_language(rng, atoms)
        s1 = random_form(rng, language)
        s2 = random_form(rng, language)
        if logic_mod.phi_weighted(language, s1) == 0:
            continue
        exact = logic_mod.exact_entail(language, s1, s2)
        bound = logic_mod.lower_bound_entail(language, s1, s2)
        assert bound <= exact
        if len(s1) == 1 and len(s2) == 1:
            assert bound == exact
            single += 1
        done += 1
    assert single > 0
    report(7, "lower bound below exact entailment (%d single)" % single)


def test_c08_taxonomy_completions():
    rng = random.Random(777)
    for _ in range(100):
        tree = random_tree(rng, max_nodes=50)
        total = sum(tree.p.values())
        tree = tax_mod.Taxonomy(
            tree.parents, {k: v / total for k, v in tree.p.items()}
        )
        ideal = tax_mod.ideal_completion(tree)
        for node in tree.nodes:
            assert ideal[node].norm1() == tree.p_hat(node)  # exact, within 1e-12
        nodes = tree.nodes if len(tree.nodes) <= 12 else rng.sample(tree.nodes, 12)
        for x in nodes:
            for y in nodes:
                assert (ideal[x] <= ideal[y]) == tree.le(x, y)
        distance = tax_mod.distance_completion(tree)
        for x in nodes:
            for y in nodes:
                got = (distance[x] - distance[y]).norm1()
                assert abs(got - tax_mod.jiang_conrath(tree, x, y)) < 1e-9
        cover = tax_mod.chain_cover(tree)
        assert len(cover["chains"]) == len(tree.leaves)
        assert cover["unique_minimal"]

    plant = tax_mod.load_taxonomy(str(data_path("plant.tax")))
    cover = tax_mod.chain_cover(plant)
    assert len(cover["chains"]) == 6
    assert abs(
        tax_mod.jiang_conrath(plant, "oat", "barley") - 2 * math.log(4)
    ) < 1e-9
    report(8, "taxonomy completions")


def test_c09_projection_product_disambiguation():
    from tests.test_taxonomy import line_mark_taxonomy

    taxonomy = line_mark_taxonomy()
    projections = tax_mod.projection_completion(taxonomy)
    w_line = tax_mod.ProjectionSum(
        [
            (Fraction(3, 10), projections["l1"]),
            (Fraction(1, 10), projections["l2"]),
        ]
    )
    w_mark = tax_mod.ProjectionSum(
        [
            (Fraction(1, 5), projections["m1"]),
            (Fraction(1, 10), projections["m2"]),
        ]
    )
    product = tax_mod.term_product(w_line, w_mark)
    assert product.terms == [(Fraction(1, 100), projections["l2"])]
    report(9, "projection-product disambiguation 1/100")


def test_c10_link_grammar():
    lexicon = lg.load_lexicon(str(data_path("plant.lex")))
    sentence = "they mashed their way through the thick mud".split()
    assert lg.sentence_phi(lexicon, sentence) == 1
    [(assignment, _)] = lg.track_disjuncts(lexicon, sentence)
    assert assignment[1] == 1  # mashed uses |s><m|<o|
    assert assignment[3] == 0  # way uses |d>|o>
    assert assignment[7] == 3  # mud uses |a>|d>|j>
    assert lg.sentence_phi(lexicon, ["they", "they"]) == 0

    rng = random.Random(99)
    lex = random_lexicon(rng, n_words=3)
    words = sorted(lex.entries)
    done = 0
    while done < 50:
        sent = [rng.choice(words) for _ in range(rng.randint(1, 6))]
        valid, depth = oracle_parse_data(lex, sent)
        if depth > 6:
            continue
        symbolic = lg.sentence_phi(lex, sent)
        assert symbolic == len(valid)
        assert lg.sentence_matrix_phi(lex, sent, depth) == symbolic
        done += 1

    expected = np.zeros((7, 7), dtype=np.int64)
    expected[1, 0] = expected[3, 1] = expected[4, 2] = 1
    assert np.array_equal(lg.creator_matrix("a", ["a", "b"], 2), expected)
    report(10, "link grammar parse counting and matrices")


def test_c11_munn_trees():
    tree = munn_mod.munn_tree(PAPER_WORD)
    assert tree.n_nodes == 10
    assert tree == munn_mod._canonicalize(set(PAPER_EDGES), "R1", "R10")
    assert munn_mod.munn_tree(PARSE_WORD).is_idempotent()
    rng = random.Random(2024)
    for _ in range(500):
        word = [
            (rng.choice("abcd"), rng.choice([1, -1]))
            for _ in range(rng.randint(1, 8))
        ]
        x = munn_mod.munn_tree(word)
        assert munn_mod.fis_mul(munn_mod.fis_mul(x, munn_mod.fis_inverse(x)), x) == x
    report(11, "Munn trees")


def test_c12_plsa_loglik_monotone():
    start = time.perf_counter()
    rng = np.random.default_rng(31337)
    for trial in range(20):
        shape = (int(rng.integers(2, 7)), int(rng.integers(2, 7)))
        counts = rng.integers(0, 9, size=shape).astype(float)
        if not counts.any():
            counts[0, 0] = 1.0
        topics = int(rng.integers(1, 5))
        model = topics_mod.plsa_em(counts, topics, iters=50, seed=trial)
        assert len(model.loglik) == 50
        for a, b in zip(model.loglik, model.loglik[1:]):
            assert b >= a - 1e-9
    elapsed = time.perf_counter() - start
    assert elapsed < 5.0
    report(12, "pLSA log-likelihood monotone (%.2fs)" % elapsed)


def test_c13_rte_smoke_substitute(capsys):
    code = main(["rte-smoke", "--seed", "11", "--samples", "150", "--format", "json"])
    out1 = capsys.readouterr().out
    assert code == 0
    code = main(["rte-smoke", "--seed", "11", "--samples", "150", "--format", "json"])
    out2 = capsys.readouterr().out
    assert code == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert len(payload["pairs"]) == 20
    for row in payload["pairs"]:
        assert set(row["scores"]) == {"subseq", "overlap", "docproj", "topicproj"}
        for value in row["scores"].values():
            assert 0.0 <= value <= 1.0
    with capsys.disabled():
        report(13, "rte-smoke: four theories defined and deterministic")
