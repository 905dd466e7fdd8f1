"""Command-line front door.

Every command is deterministic: randomness sits behind a mandatory
--seed, floats print with at most 12 significant digits in shortest
round-trip form, and JSON uses sorted keys so that parsing and
re-serializing the output is byte-identical.

Exit codes: 0 success, 1 usage, 2 data/format error, 3 numeric failure
(undefined entailment, unparseable sentence).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from importlib import resources

from . import corpus as corpus_mod
from . import distsim as distsim_mod
from . import entail as entail_mod
from . import linkgrammar as lg
from . import logic as logic_mod
from . import munn as munn_mod
from . import taxonomy as tax_mod
from . import topics as topics_mod
from .errors import ContextAlgebraError, FormatError, Undefined
from .riesz import EXACT, FLOAT


def exact_mode():
    return os.environ.get("CONTEXT_ALGEBRA_EXACT") == "1"


def format_float(x):
    """Shortest round-trip decimal, capped at 12 significant digits."""
    value = float(x)
    rounded = float(format(value, ".12g"))
    return repr(rounded)


def format_count(x):
    """Parse counts print as plain integers; other values as floats."""
    value = float(x)
    if value == int(value):
        return str(int(value))
    return format_float(value)


def _round_floats(obj):
    if isinstance(obj, float):
        return float(format(obj, ".12g"))
    if isinstance(obj, Fraction):
        return float(format(float(obj), ".12g"))
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def emit_json(payload, out):
    out.write(json.dumps(_round_floats(payload), sort_keys=True, separators=(", ", ": ")))
    out.write("\n")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(1, "%s: error: %s\n" % (self.prog, message))


def data_path(name):
    return resources.files("context_algebra").joinpath("data", name)


# -- entailment theories -------------------------------------------------


def _load_collection(path):
    docs = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "\t" in line:
                line = line.split("\t")[1]
            docs.append(line.split())
    return entail_mod.DocumentCollection(docs)


def _theory_score(args, x, y):
    theory = args.theory
    if theory == "subseq":
        mode = EXACT if exact_mode() else FLOAT
        return entail_mod.subseq_entail(x, y, mode)
    if theory == "overlap":
        mode = EXACT if exact_mode() else FLOAT
        return entail_mod.overlap_entail(x, y, mode)
    if theory == "docproj":
        if not args.corpus:
            raise FormatError("--theory docproj needs --corpus")
        return entail_mod.docproj_entail(_load_collection(args.corpus), x, y)
    if theory == "topicproj":
        if not args.model:
            raise FormatError("--theory topicproj needs --model")
        if args.seed is None:
            raise FormatError("--theory topicproj needs --seed")
        model = entail_mod.load_topic_model(args.model)
        return entail_mod.topicproj_entail(model, x, y, args.samples, args.seed)
    if theory == "corpus":
        if not args.corpus:
            raise FormatError("--theory corpus needs --corpus")
        mode = EXACT if exact_mode() else FLOAT
        model = corpus_mod.load_corpus(args.corpus, general=args.general, mode=mode)
        return model.entailment(x, y)
    if theory == "logic":
        if not args.lang:
            raise FormatError("--theory logic needs --lang")
        translation = logic_mod.load_language(args.lang)
        return translation.entailment(x, y)
    raise FormatError("unknown theory %r" % theory)


def cmd_entail(args, out):
    score = _theory_score(args, args.x.split(), args.y.split())
    if args.format == "json":
        emit_json({"theory": args.theory, "x": args.x, "y": args.y, "score": float(score)}, out)
    else:
        out.write(format_float(score) + "\n")
    return 0


# -- corpus ---------------------------------------------------------------


def cmd_corpus(args, out):
    mode = EXACT if exact_mode() else FLOAT
    model = corpus_mod.load_corpus(args.corpus, general=args.general, mode=mode)
    if args.action == "phi":
        value = model.phi(model.context_vector(args.x.split()).vec)
        if args.format == "json":
            emit_json({"phi": float(value), "x": args.x}, out)
        else:
            out.write(format_float(value) + "\n")
        return 0
    # product
    basis = corpus_mod.choose_basis(
        model, model.substrings(max_len=args.max_basis_len)
    )
    u = model.context_vector(args.x.split()).vec
    v = model.context_vector(args.y.split()).vec
    product = basis.product(u, v)
    entries = {k: float(val) for k, val in sorted(product.items())}
    if args.format == "json":
        emit_json({"x": args.x, "y": args.y, "product": entries}, out)
    else:
        if not entries:
            out.write("0\n")
        for label, value in sorted(entries.items()):
            out.write("%s\t%s\n" % (label, format_float(value)))
    return 0


# -- topic models ----------------------------------------------------------


def cmd_lsa(args, out):
    matrix = topics_mod.load_count_matrix(args.matrix)
    result = topics_mod.lsa_truncate(matrix, args.k)
    approx = result["approx"]
    if args.format == "json":
        emit_json(
            {
                "singular_values": result["singular_values"],
                "rows": matrix.row_labels,
                "cols": matrix.col_labels,
                "approx": [[float(x) for x in row] for row in approx],
            },
            out,
        )
    else:
        out.write(
            "singular values: %s\n"
            % " ".join(format_float(s) for s in result["singular_values"])
        )
        for label, row in zip(matrix.row_labels, approx):
            out.write(
                "%s\t%s\n" % (label, "\t".join(format_float(x) for x in row))
            )
    return 0


def cmd_plsa(args, out):
    matrix = topics_mod.load_count_matrix(args.matrix)
    model = topics_mod.plsa_em(matrix, args.topics, args.iters, args.seed)
    if args.format == "json":
        emit_json(
            {
                "pz": [float(x) for x in model.pz],
                "pw_z": [[float(x) for x in row] for row in model.pw_z],
                "pd_z": [[float(x) for x in row] for row in model.pd_z],
                "loglik": [float(x) for x in model.loglik],
            },
            out,
        )
    else:
        out.write("loglik: %s\n" % " ".join(format_float(x) for x in model.loglik))
        out.write("pz: %s\n" % " ".join(format_float(x) for x in model.pz))
    return 0


# -- distributional similarity ---------------------------------------------


def cmd_distsim(args, out):
    mode = EXACT if exact_mode() else FLOAT
    model = corpus_mod.load_corpus(args.corpus, general=args.general, mode=mode)
    u = distsim_mod.FeatureVector(model.context_vector([args.u]).vec.to_float())
    v = distsim_mod.FeatureVector(model.context_vector([args.v]).vec.to_float())
    suite = distsim_mod.similarity_suite(u, v, args.alpha)
    suite["weeds_precision"] = distsim_mod.weeds_precision(u, v, args.assoc)
    suite["weeds_recall"] = distsim_mod.weeds_recall(u, v, args.assoc)
    if args.format == "json":
        emit_json({"u": args.u, "v": args.v, "measures": suite}, out)
    else:
        for key in sorted(suite):
            out.write("%s\t%s\n" % (key, format_float(suite[key])))
    return 0


# -- taxonomy ----------------------------------------------------------------


def cmd_taxonomy(args, out):
    taxonomy = tax_mod.load_taxonomy(args.taxonomy)
    if args.action == "chains":
        cover = tax_mod.chain_cover(taxonomy)
        n = len(cover["chains"])
        unique = "yes" if cover["unique_minimal"] else "no"
        if args.format == "json":
            emit_json(
                {
                    "chains": [list(c) for c in cover["chains"]],
                    "unique_minimal": cover["unique_minimal"],
                },
                out,
            )
        else:
            out.write("%d chains (unique minimal covering: %s)\n" % (n, unique))
        return 0
    if args.action == "distance":
        value = tax_mod.jiang_conrath(taxonomy, args.x, args.y)
        if args.format == "json":
            emit_json({"x": args.x, "y": args.y, "distance": value}, out)
        else:
            out.write(format_float(value) + "\n")
        return 0
    # embed
    if args.kind == "projection":
        projections = tax_mod.projection_completion(taxonomy)
        nodes = [args.node] if args.node else sorted(projections)
        payload = {
            n: sorted(projections[n].support) for n in nodes
        }
        if args.format == "json":
            emit_json({"kind": "projection", "projections": payload}, out)
        else:
            for n in nodes:
                out.write("%s\t%s\n" % (n, " ".join(payload[n])))
        return 0
    builders = {
        "ideal": tax_mod.ideal_completion,
        "distance": tax_mod.distance_completion,
        "chain": tax_mod.chain_completion,
    }
    completion = builders[args.kind](taxonomy)
    nodes = [args.node] if args.node else sorted(completion.vectors)
    payload = {n: {k: float(v) for k, v in completion[n].items()} for n in nodes}
    if args.format == "json":
        emit_json({"kind": args.kind, "vectors": payload}, out)
    else:
        for n in nodes:
            entries = " ".join(
                "%s:%s" % (k, format_float(v)) for k, v in sorted(payload[n].items())
            )
            out.write("%s\t%s\n" % (n, entries))
    return 0


# -- logic --------------------------------------------------------------------


def _parse_form(translation, text):
    """Weighted form: `class:w,class:w` or a plain token sequence."""
    if ":" in text:
        pairs = []
        for chunk in text.split(","):
            label, _, weight = chunk.partition(":")
            pairs.append((label.strip(), corpus_mod.parse_weight(weight)))
        return logic_mod.WeightedForm(pairs)
    tokens = tuple(text.split())
    if tokens not in translation.mu:
        raise Undefined("string %r is outside the language" % text)
    return logic_mod.WeightedForm([(translation.mu[tokens], 1)])


def cmd_logic(args, out):
    if args.action == "identities":
        report = logic_mod.prop_projection_identities(args.atoms)
        if args.format == "json":
            emit_json(report, out)
        elif report["ok"]:
            out.write(
                "all identities hold: %d classes, %d pairs checked\n"
                % (report["classes"], report["pairs_checked"])
            )
        else:
            out.write("violation: %s\n" % (report["violation"],))
        return 0 if report["ok"] else 3
    translation = logic_mod.load_language(args.lang)
    s1 = _parse_form(translation, args.s1)
    s2 = _parse_form(translation, args.s2)
    if args.action == "entail":
        value = logic_mod.exact_entail(translation.language, s1, s2)
    else:
        value = logic_mod.lower_bound_entail(translation.language, s1, s2)
    if args.format == "json":
        emit_json({"s1": args.s1, "s2": args.s2, "score": float(value)}, out)
    else:
        out.write(format_float(value) + "\n")
    return 0


# -- link grammar ----------------------------------------------------------------


def cmd_lg(args, out):
    if args.action == "munn":
        tree = munn_mod.munn_tree(munn_mod.parse_fis_word(args.sentence))
        if args.format == "dot":
            out.write(tree.to_dot() + "\n")
        elif args.format == "json":
            payload = tree.to_json_dict()
            payload["idempotent"] = tree.is_idempotent()
            emit_json(payload, out)
        else:
            out.write(
                "nodes=%d start=%d finish=%d idempotent=%s\n"
                % (
                    tree.n_nodes,
                    tree.start,
                    tree.finish,
                    "yes" if tree.is_idempotent() else "no",
                )
            )
            for s, label, t in sorted(tree.edges):
                out.write("%d -%s-> %d\n" % (s, label, t))
        return 0
    if args.action == "from-categorial":
        op = lg.categorial_to_lg(args.sentence)
        terms = [
            {"creators": list(c), "annihilators": list(a), "coeff": float(w)}
            for (c, a), w in sorted(op.terms.items())
        ]
        if args.format == "json":
            emit_json({"category": args.sentence, "terms": terms}, out)
        else:
            out.write(repr(op) + "\n")
        return 0

    exact = exact_mode()
    lexicon = lg.load_lexicon(args.lexicon, exact=exact)
    words = args.sentence.split()
    if args.action == "phi":
        value = lg.sentence_phi(lexicon, words)
        if args.format == "json":
            emit_json({"sentence": args.sentence, "phi": float(value)}, out)
        else:
            out.write(format_count(value) + "\n")
        return 0
    if args.action == "parse":
        result = lg.stochastic_phi(lexicon, words)
        parses = []
        for assignment, weight, prob in result.parses:
            fis = lg.parse_to_fis(lexicon, words, assignment)
            parses.append(
                {
                    "assignment": list(assignment),
                    "weight": float(weight),
                    "probability": float(prob),
                    "fis_word": munn_mod.format_fis_word(fis["word"]),
                    "idempotent": fis["idempotent"],
                    "strict_parse": fis["strict_parse"],
                }
            )
        if args.format == "json":
            emit_json({"sentence": args.sentence, "raw": float(result.raw), "parses": parses}, out)
        else:
            out.write("raw %s, %d parse(s)\n" % (format_float(result.raw), len(parses)))
            for p in parses:
                out.write(
                    "  disjuncts %s  p=%s  %s\n"
                    % (
                        ",".join(str(i) for i in p["assignment"]),
                        format_float(p["probability"]),
                        p["fis_word"],
                    )
                )
        return 0
    if args.action == "matrix":
        value = lg.sentence_matrix_phi(lexicon, words, args.depth)
        dim = len(lg.fock_basis(lexicon.link_types, args.depth))
        if args.format == "json":
            emit_json(
                {"sentence": args.sentence, "phi": float(value), "dimension": dim},
                out,
            )
        else:
            out.write("%s (dimension %d)\n" % (format_count(value), dim))
        return 0
    raise FormatError("unknown lg action %r" % args.action)


# -- RTE smoke run -----------------------------------------------------------------


def _smoke_pair(pair, collection, model, samples, seed, index):
    pair_id, text, hyp, gold = pair
    scores = {
        "subseq": entail_mod.subseq_entail(text, hyp),
        "overlap": entail_mod.overlap_entail(text, hyp),
        "docproj": entail_mod.docproj_entail(collection, text, hyp),
        "topicproj": entail_mod.topicproj_entail(
            model, text, hyp, samples, entail_mod.pair_seed(seed, index)
        ),
    }
    for name, score in scores.items():
        if not 0.0 <= float(score) <= 1.0:
            raise Undefined("theory %s produced %r outside [0,1]" % (name, score))
    return {"id": pair_id, "gold": gold, "scores": {k: float(v) for k, v in scores.items()}}


def cmd_rte_smoke(args, out):
    pairs_file = args.pairs or str(data_path("rte_mini.tsv"))
    model_file = args.model or str(data_path("topic_mini.txt"))
    pairs = entail_mod.load_rte_pairs(pairs_file)
    collection = entail_mod.DocumentCollection([text for _, text, _, _ in pairs])
    model = entail_mod.load_topic_model(model_file)

    def work(indexed):
        index, pair = indexed
        return index, _smoke_pair(pair, collection, model, args.samples, args.seed, index)

    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(work, enumerate(pairs)))
    else:
        results = [work(item) for item in enumerate(pairs)]
    results.sort(key=lambda item: item[0])
    rows = [row for _, row in results]
    if args.format == "json":
        emit_json({"pairs": rows}, out)
    else:
        out.write("id\tgold\tsubseq\toverlap\tdocproj\ttopicproj\n")
        for row in rows:
            s = row["scores"]
            out.write(
                "%s\t%d\t%s\t%s\t%s\t%s\n"
                % (
                    row["id"],
                    row["gold"],
                    format_float(s["subseq"]),
                    format_float(s["overlap"]),
                    format_float(s["docproj"]),
                    format_float(s["topicproj"]),
                )
            )
        out.write("%d pairs, all scores defined and in [0,1]\n" % len(rows))
    return 0


# -- argument wiring ------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="context-algebra", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, choices=("text", "json")):
        p.add_argument("--format", choices=choices, default="text")

    p = sub.add_parser("entail", help="degree of entailment between two strings")
    p.add_argument("--theory", required=True,
                   choices=["subseq", "overlap", "docproj", "topicproj", "corpus", "logic"])
    p.add_argument("--corpus")
    p.add_argument("--general", action="store_true")
    p.add_argument("--model")
    p.add_argument("--lang")
    p.add_argument("--samples", type=int, default=2000)
    p.add_argument("--seed", type=int)
    p.add_argument("x")
    p.add_argument("y")
    add_format(p)
    p.set_defaults(func=cmd_entail)

    p = sub.add_parser("corpus", help="corpus-model probability and products")
    corpus_sub = p.add_subparsers(dest="action", required=True)
    q = corpus_sub.add_parser("phi")
    q.add_argument("--corpus", required=True)
    q.add_argument("--general", action="store_true")
    q.add_argument("x")
    add_format(q)
    q.set_defaults(func=cmd_corpus, action="phi", y=None)
    q = corpus_sub.add_parser("product")
    q.add_argument("--corpus", required=True)
    q.add_argument("--general", action="store_true")
    q.add_argument("--max-basis-len", type=int, default=None)
    q.add_argument("x")
    q.add_argument("y")
    add_format(q)
    q.set_defaults(func=cmd_corpus, action="product")

    p = sub.add_parser("lsa", help="truncated SVD of a count matrix")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("matrix")
    add_format(p)
    p.set_defaults(func=cmd_lsa)

    p = sub.add_parser("plsa", help="pLSA by EM")
    p.add_argument("--topics", type=int, required=True)
    p.add_argument("--iters", type=int, default=50)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("matrix")
    add_format(p)
    p.set_defaults(func=cmd_plsa)

    p = sub.add_parser("distsim", help="similarity suite for two words")
    p.add_argument("--corpus", required=True)
    p.add_argument("--general", action="store_true")
    p.add_argument("--alpha", type=float, default=0.99)
    p.add_argument("--assoc", choices=["freq", "mi"], default="freq")
    p.add_argument("u")
    p.add_argument("v")
    add_format(p)
    p.set_defaults(func=cmd_distsim)

    p = sub.add_parser("taxonomy", help="taxonomy embeddings and distances")
    tax_sub = p.add_subparsers(dest="action", required=True)
    q = tax_sub.add_parser("embed")
    q.add_argument("taxonomy")
    q.add_argument("--kind", choices=["ideal", "distance", "chain", "projection"],
                   default="ideal")
    q.add_argument("--node")
    add_format(q)
    q.set_defaults(func=cmd_taxonomy, action="embed")
    q = tax_sub.add_parser("distance")
    q.add_argument("taxonomy")
    q.add_argument("x")
    q.add_argument("y")
    add_format(q)
    q.set_defaults(func=cmd_taxonomy, action="distance")
    q = tax_sub.add_parser("chains")
    q.add_argument("taxonomy")
    add_format(q)
    q.set_defaults(func=cmd_taxonomy, action="chains")

    p = sub.add_parser("logic", help="logical entailment and identities")
    logic_sub = p.add_subparsers(dest="action", required=True)
    for action in ("entail", "lower-bound"):
        q = logic_sub.add_parser(action)
        q.add_argument("--lang", required=True)
        q.add_argument("s1")
        q.add_argument("s2")
        add_format(q)
        q.set_defaults(func=cmd_logic, action=action)
    q = logic_sub.add_parser("identities")
    q.add_argument("--atoms", type=int, default=2)
    add_format(q)
    q.set_defaults(func=cmd_logic, action="identities")

    p = sub.add_parser("lg", help="link grammar operators, matrices, Munn trees")
    lg_sub = p.add_subparsers(dest="action", required=True)
    for action in ("phi", "parse", "matrix"):
        q = lg_sub.add_parser(action)
        q.add_argument("--lexicon", required=True)
        if action == "matrix":
            q.add_argument("--depth", type=int, default=4)
        q.add_argument("sentence")
        add_format(q)
        q.set_defaults(func=cmd_lg, action=action)
    q = lg_sub.add_parser("munn")
    q.add_argument("sentence", metavar="word")
    add_format(q, choices=("text", "json", "dot"))
    q.set_defaults(func=cmd_lg, action="munn")
    q = lg_sub.add_parser("from-categorial")
    q.add_argument("sentence", metavar="category")
    add_format(q)
    q.set_defaults(func=cmd_lg, action="from-categorial")

    p = sub.add_parser("rte-smoke", help="run all four theories on the mini corpus")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--pairs")
    p.add_argument("--model")
    add_format(p)
    p.set_defaults(func=cmd_rte_smoke)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return args.func(args, sys.stdout)
    except ContextAlgebraError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
