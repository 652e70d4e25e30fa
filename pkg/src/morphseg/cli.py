"""Command line interface.

Subcommands: train, segment, eval, compare. Exit codes: 0 on success,
2 on usage errors, 3 on data errors (unreadable input, bad file formats,
empty corpora and the like).
"""

import argparse
import json
import logging
import random
import sys
import time
from pathlib import Path

from . import align, io, mdl, ml, report
from .corpus import ALPHABETS, PreprocessConfig, read_corpus, split_corpus, truncate
from .errors import MorphsegError, NotTrainedError, UnsegmentableError
from .mdl import ChunkStore, MdlConfig
from .ml import MorphStats

_logger = logging.getLogger(__name__)

EXIT_USAGE = 2
EXIT_DATA = 3


class UsageError(Exception):
    pass


def _alphabet(value):
    """Preset name or an explicit string of allowed characters."""
    if value in ALPHABETS:
        return ALPHABETS[value]
    if not value:
        raise UsageError("empty alphabet")
    return frozenset(value)


def _preprocess_config(args):
    return PreprocessConfig(alphabet=_alphabet(args.alphabet), lowercase=not args.no_lowercase)


def _check_alphabet_codable(config, char_bits):
    if len(config.alphabet) > 2 ** char_bits:
        raise UsageError(
            "alphabet has %d characters; %d bits per character can code only %d"
            % (len(config.alphabet), char_bits, 2 ** char_bits)
        )


def _add_corpus_options(p):
    p.add_argument("--corpus", required=True, help="raw text corpus (UTF-8)")
    p.add_argument(
        "--alphabet",
        default="english",
        help="preset (english, finnish) or explicit character set",
    )
    p.add_argument("--no-lowercase", action="store_true", help="keep original case")


def _add_method_options(p):
    p.add_argument("--char-bits", type=int, default=5, help="codebook bits per character")
    p.add_argument("--seed", type=int, default=mdl.DEFAULT_SEED, help="random seed")
    p.add_argument(
        "--dream-interval",
        type=int,
        default=MdlConfig.dream_interval,
        help="tokens between dreaming events for rec-mdl (0 disables)",
    )
    p.add_argument(
        "--dream-passes", type=int, default=MdlConfig.dream_passes,
        help="maximum reprocessing passes per dreaming event",
    )
    p.add_argument("--iterations", type=int, default=10, help="EM iterations for seq-ml")
    p.add_argument(
        "--lambda",
        dest="interval_mean",
        type=float,
        default=ml.DEFAULT_INTERVAL_MEAN,
        help="mean random segment length for seq-ml",
    )
    p.add_argument(
        "--no-reject", action="store_true",
        help="disable segmentation rejection and random fallback in seq-ml",
    )


def build_parser():
    parser = argparse.ArgumentParser(
        prog="morphseg",
        description="Discover morphs from raw text and score them against reference analyses.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_train = sub.add_parser("train", help="train a model on a corpus")
    p_train.add_argument("--method", required=True, choices=["rec-mdl", "seq-ml"])
    _add_corpus_options(p_train)
    p_train.add_argument("--train-tokens", type=int, help="use only the first N tokens")
    p_train.add_argument("--model", required=True, help="output model file")
    p_train.add_argument("--cost-curve", help="write tokens,avg-cost CSV (rec-mdl)")
    _add_method_options(p_train)

    p_seg = sub.add_parser("segment", help="segment words with a trained model")
    p_seg.add_argument("--model", required=True)
    p_seg.add_argument("--words", required=True, help="one word per line")
    p_seg.add_argument("--out", help="output file (default stdout)")
    p_seg.add_argument("--no-lowercase", action="store_true")

    p_eval = sub.add_parser("eval", help="score segmentations against reference analyses")
    p_eval.add_argument("--train-seg", required=True, help="segmentation used to fit distances")
    p_eval.add_argument("--test-seg", required=True, help="segmentation to score")
    p_eval.add_argument("--gold", required=True, help="reference analyses TSV")
    p_eval.add_argument("--tags", help="file of tags to keep (default: keep all)")
    p_eval.add_argument("--train-counts", help="word<TAB>count file for token weighting")
    p_eval.add_argument("--test-counts", help="word<TAB>count file for token weighting")
    p_eval.add_argument("--max-distance", type=float, help="charge for unseen pairs")
    p_eval.add_argument("--em-iterations", type=int, default=align.DEFAULT_EM_ITERS)
    p_eval.add_argument("--dump-alignments", help="write per-word test alignments")
    p_eval.add_argument("--out", help="metrics output file (default stdout)")

    p_cmp = sub.add_parser("compare", help="train and evaluate both methods on one corpus")
    _add_corpus_options(p_cmp)
    p_cmp.add_argument("--train-tokens", type=int, required=True)
    p_cmp.add_argument("--test-tokens", type=int, required=True)
    p_cmp.add_argument("--gold", help="reference analyses TSV")
    p_cmp.add_argument("--tags", help="file of tags to keep")
    p_cmp.add_argument("--max-distance", type=float)
    p_cmp.add_argument("--cost-curve", help="write the rec-mdl cost curve CSV")
    p_cmp.add_argument("--out-dir", help="write models, segmentations and report here")
    _add_method_options(p_cmp)
    return parser


# -- train ----------------------------------------------------------------


def _read_training_corpus(args):
    config = _preprocess_config(args)
    corpus = read_corpus(args.corpus, config)
    if getattr(args, "train_tokens", None):
        corpus = truncate(corpus, args.train_tokens)
    return corpus


def cmd_train(args):
    corpus = _read_training_corpus(args)
    if args.method == "rec-mdl":
        _check_alphabet_codable(_preprocess_config(args), args.char_bits)
        config = MdlConfig(
            char_bits=args.char_bits,
            dream_interval=args.dream_interval,
            dream_passes=args.dream_passes,
            seed=args.seed,
        )
        curve = [] if args.cost_curve else None
        store = mdl.train_online(corpus, config, curve=curve)
        io.save_mdl_model(store, args.model)
        if args.cost_curve:
            io.write_cost_curve(curve, args.cost_curve)
        _logger.info(
            "trained on %d tokens: %d morphs, %.1f bits",
            len(corpus), store.codebook_size(), store.tracked_cost,
        )
    else:
        rng = random.Random(args.seed)
        segmentation, stats = ml.train_em(
            corpus,
            iterations=args.iterations,
            rng=rng,
            mean_interval=args.interval_mean,
            use_rejection=not args.no_reject,
        )
        io.save_ml_model(stats, args.model)
        _logger.info(
            "trained on %d tokens: %d morphs, %.1f bits",
            len(corpus), len(stats.counts), stats.corpus_bits(),
        )
    return 0


# -- segment ---------------------------------------------------------------


def _segment_with(model, word, rng=None):
    if isinstance(model, ChunkStore):
        try:
            return model.segment_word(word)
        except NotTrainedError:
            # adapt online: process the word once, then trace it
            model.process_word(word)
            return model.segment_word(word)
    try:
        morphs, _ = ml.viterbi_segment(word, model)
        return morphs
    except UnsegmentableError:
        _logger.warning("no known morphs cover %r; kept whole", word)
        return [word]


def _read_words(path, lowercase):
    with open(path, encoding="utf-8") as f:
        words = [line.strip() for line in f]
    words = [w for w in words if w]
    return [w.lower() for w in words] if lowercase else words


def cmd_segment(args):
    model = _load_any_model(args.model)
    words = _read_words(args.words, not args.no_lowercase)
    lines = [" ".join([io.SEG_FORMAT, io.VERSION])]
    for word in words:
        lines.append("%s\t%s" % (word, " ".join(_segment_with(model, word))))
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _load_any_model(path):
    kind = io.sniff_format(path)
    if kind == io.MDL_FORMAT:
        return io.load_mdl_model(path)
    if kind == io.ML_FORMAT:
        return io.load_ml_model(path)
    raise MorphsegError("%s: not a model file (header %r)" % (path, kind))


# -- eval -------------------------------------------------------------------


def _counts_for(segmentation, path):
    if path:
        return io.load_word_counts(path)
    return {word: 1 for word in segmentation}


def cmd_eval(args):
    train_seg = io.load_segmentation(args.train_seg)
    test_seg = io.load_segmentation(args.test_seg)
    tag_filter = align.load_tag_filter(args.tags) if args.tags else None
    gold = align.load_gold(args.gold, tag_filter)
    train_counts = _counts_for(train_seg, args.train_counts)
    test_counts = _counts_for(test_seg, args.test_counts)
    result, table = align.evaluate(
        train_seg,
        test_seg,
        gold,
        train_counts,
        test_counts,
        max_iters=args.em_iterations,
        max_distance=args.max_distance,
    )
    record = {
        "alignment_distance_bits": result.alignment_distance_bits,
        "unseen_pair_pct": result.unseen_pair_pct,
        "max_distance": table.max_distance,
    }
    line = json.dumps(record, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as f:
            f.write(line)
    else:
        sys.stdout.write(line)
    if args.dump_alignments:
        with open(args.dump_alignments, "w", encoding="utf-8", newline="\n") as f:
            for word in sorted(result.alignments):
                f.write(
                    align.format_alignment(
                        word, test_seg[word], gold[word].labels, result.alignments[word]
                    )
                    + "\n"
                )
    return 0


# -- compare -----------------------------------------------------------------


def _segment_types(store, corpus):
    """Trace every corpus type; unknown types are processed in first."""
    segmentation = {}
    for word in corpus.type_counts:
        segmentation[word] = _segment_with(store, word)
    return segmentation


def _segment_types_ml(stats, corpus):
    segmentation = {}
    for word in corpus.type_counts:
        try:
            morphs, _ = ml.viterbi_segment(word, stats)
        except UnsegmentableError:
            _logger.warning("no known morphs cover %r; kept whole", word)
            morphs = [word]
        segmentation[word] = morphs
    return segmentation


def cmd_compare(args):
    pre = _preprocess_config(args)
    _check_alphabet_codable(pre, args.char_bits)
    corpus = read_corpus(args.corpus, pre)
    train, test = split_corpus(corpus, args.train_tokens, args.test_tokens)

    gold = None
    if args.gold:
        tag_filter = align.load_tag_filter(args.tags) if args.tags else None
        gold = align.load_gold(args.gold, tag_filter)

    out_dir = Path(args.out_dir) if args.out_dir else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    # method 1: online recursive MDL
    config = MdlConfig(
        char_bits=args.char_bits,
        dream_interval=args.dream_interval,
        dream_passes=args.dream_passes,
        seed=args.seed,
    )
    curve = [] if args.cost_curve else None
    t0 = time.perf_counter()
    store = mdl.train_online(train, config, curve=curve)
    mdl_time = time.perf_counter() - t0
    if args.cost_curve:
        io.write_cost_curve(curve, args.cost_curve)
    if out_dir:
        io.save_mdl_model(store, out_dir / "rec_mdl.model")
    mdl_train_seg = _segment_types(store, train)
    mdl_test_seg = _segment_types(store, test)  # adapts the store to unseen words

    # method 2: batch Viterbi EM
    rng = random.Random(args.seed)
    t0 = time.perf_counter()
    ml_seg, stats = ml.train_em(
        train,
        iterations=args.iterations,
        rng=rng,
        mean_interval=args.interval_mean,
        use_rejection=not args.no_reject,
    )
    ml_time = time.perf_counter() - t0
    if out_dir:
        io.save_ml_model(stats, out_dir / "seq_ml.model")
    ml_test_seg = _segment_types_ml(stats, test)

    evaluations = {"rec-mdl": None, "seq-ml": None}
    if gold:
        for method, train_seg, test_seg in (
            ("rec-mdl", mdl_train_seg, mdl_test_seg),
            ("seq-ml", ml_seg, ml_test_seg),
        ):
            result, _ = align.evaluate(
                train_seg,
                test_seg,
                gold,
                train.type_counts,
                test.type_counts,
                max_distance=args.max_distance,
            )
            evaluations[method] = result

    reports = [
        report.build_report(
            store, evaluation=evaluations["rec-mdl"], wall_time=mdl_time
        ),
        report.build_report(
            stats,
            evaluation=evaluations["seq-ml"],
            wall_time=ml_time,
            char_bits=args.char_bits,
        ),
    ]
    if out_dir:
        io.save_segmentation(mdl_train_seg, out_dir / "rec_mdl.train_seg.tsv")
        io.save_segmentation(mdl_test_seg, out_dir / "rec_mdl.test_seg.tsv")
        io.save_segmentation(ml_seg, out_dir / "seq_ml.train_seg.tsv")
        io.save_segmentation(ml_test_seg, out_dir / "seq_ml.test_seg.tsv")
        report.write_metrics(reports, out_dir / "report.json")
    print(report.format_comparison(reports))
    return 0


_COMMANDS = {
    "train": cmd_train,
    "segment": cmd_segment,
    "eval": cmd_eval,
    "compare": cmd_compare,
}


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print("morphseg: error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except MorphsegError as exc:
        print("morphseg: error: %s" % exc, file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print("morphseg: error: %s" % exc, file=sys.stderr)
        return EXIT_DATA


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
