"""Command-line interface: generate streams, run evaluations, compare detectors.

Exit codes: 0 on success, 1 on usage or configuration errors, 2 on I/O or
data-format errors. A flat key-value config file (``key = value`` lines,
``#`` comments) can pre-set any long flag of the chosen subcommand; flags
given on the command line take precedence.
"""

from __future__ import annotations

import argparse
import sys

from .baselines import DDM, EDDM
from .chain import IncrementalClassifierChain
from .detector import LabelDependencyDriftDetector
from .evaluation import prequential_run, write_json_report, write_segment_rows
from .metrics import average_ranks, nemenyi_critical_distance
from .streams import (
    KINDS,
    DriftStreamSpec,
    StreamFormatError,
    generate_synthetic,
    read_dataset,
    write_dataset,
)

__all__ = ["main", "build_parser"]

DETECTOR_NAMES = ("ld3", "ddm", "eddm", "none")
METRIC_NAMES = ("example_accuracy", "hamming_score", "example_f1", "micro_f1")


class UsageError(Exception):
    """Bad flag combination or config content; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; this interface reserves 2 for
    # data errors and uses 1 for usage problems.
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _int_list(text):
    parts = [part.strip() for part in str(text).split(",")]
    try:
        return tuple(int(part) for part in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated integers, got {text!r}") from None


def _add_synthetic_flags(parser):
    parser.add_argument("--samples", type=int, default=20000,
                        help="synthetic stream length (default 20000)")
    parser.add_argument("--features", type=int, default=200,
                        help="numeric features per instance (default 200)")
    parser.add_argument("--labels", type=int, default=50,
                        help="binary labels per instance (default 50)")
    parser.add_argument("--positions", type=_int_list, default=(4000, 10000),
                        help="comma-separated 0-based drift positions (default 4000,10000)")
    parser.add_argument("--widths", type=_int_list, default=None,
                        help="comma-separated transition widths; default 1 per drift for "
                             "kind sudden, else 500")
    parser.add_argument("--kind", choices=KINDS, default="sudden",
                        help="drift flavor (default sudden)")


def _add_detector_flags(parser):
    parser.add_argument("--detector", choices=DETECTOR_NAMES, default="ld3",
                        help="drift detector to run (default ld3)")
    parser.add_argument("--w", type=int, default=500,
                        help="detector window size (default 500; 50 suits short streams)")
    parser.add_argument("--t", type=float, default=4.0,
                        help="sigma multiplier for the outlier rule (default 4.0)")
    parser.add_argument("--L", type=int, default=0,
                        help="outlier count that must be exceeded to signal drift (default 0)")
    parser.add_argument("--fusion", choices=("reciprocal", "borda", "condorcet", "mc4"),
                        default="reciprocal", help="rank fusion method (default reciprocal)")


def _add_common_flags(parser):
    parser.add_argument("--seed", type=int, default=1,
                        help="random seed for synthetic streams (default 1)")
    parser.add_argument("--config", default=None,
                        help="flat key-value file pre-setting any flag of this subcommand")


def build_parser():
    parser = _Parser(prog="labeldrift",
                     description="Multi-label stream drift detection toolkit")
    subparsers = parser.add_subparsers(dest="command", required=True)

    generate = subparsers.add_parser(
        "generate", help="write a synthetic drift stream to a dataset file")
    _add_synthetic_flags(generate)
    _add_common_flags(generate)
    generate.add_argument("--out", default=None, help="dataset file to write (required)")
    generate.add_argument("--labels-last", action="store_true",
                          help="write the label block after the features")
    generate.set_defaults(handler=_cmd_generate)

    run = subparsers.add_parser(
        "run", help="prequential evaluation of one detector on one stream")
    source = run.add_mutually_exclusive_group()
    source.add_argument("--stream", help="dataset file to evaluate on")
    source.add_argument("--synthetic", choices=KINDS, metavar="KIND",
                        help="evaluate on a synthetic stream of this kind instead")
    _add_synthetic_flags(run)
    _add_detector_flags(run)
    _add_common_flags(run)
    run.add_argument("--segments", type=int, default=25,
                     help="segments in the accuracy series (default 25)")
    run.add_argument("--out", default=None, help="JSON report file to write (required)")
    run.add_argument("--segments-out", default=None,
                     help="also write the segment series as CSV rows")
    run.add_argument("--labels-last", action="store_true",
                     help="dataset file stores the label block after the features")
    run.add_argument("--dump-detector-input", default=None,
                     help="write every value fed to the detector to this file")
    run.set_defaults(handler=_cmd_run)

    compare = subparsers.add_parser(
        "compare", help="rank several detectors across one or more streams")
    compare.add_argument("--stream", action="append", default=[],
                         help="dataset file; repeat for several streams")
    compare.add_argument("--synthetic", choices=KINDS, metavar="KIND", default=None,
                         help="additionally compare on a synthetic stream of this kind")
    _add_synthetic_flags(compare)
    _add_detector_flags(compare)
    _add_common_flags(compare)
    compare.add_argument("--detectors", default="ld3,ddm,eddm,none",
                         help="comma-separated detectors to rank (default ld3,ddm,eddm,none)")
    compare.add_argument("--alpha", type=float, default=0.05,
                         help="significance level for the critical distance (default 0.05)")
    compare.add_argument("--labels-last", action="store_true",
                         help="dataset files store the label block after the features")
    compare.add_argument("--out", default=None, help="JSON report file to write (required)")
    compare.set_defaults(handler=_cmd_compare)

    return parser, {"generate": generate, "run": run, "compare": compare}


def _load_config(path):
    mapping = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            bare = line.split("#", 1)[0].strip()
            if not bare:
                continue
            if "=" not in bare:
                raise UsageError(f"{path}:{line_no}: expected 'key = value', got {line.strip()!r}")
            key, value = bare.split("=", 1)
            mapping[key.strip()] = value.strip()
    return mapping


def _flag_given(option_strings, argv):
    for option in option_strings:
        for token in argv:
            if token == option or token.startswith(option + "="):
                return True
    return False


# flag pairs where any command-line choice silences config values for the pair
_EXCLUSIVE = {"run": (("stream", "synthetic"),)}


def _apply_config(args, subparser, argv):
    if not getattr(args, "config", None):
        return
    mapping = _load_config(args.config)
    actions = {action.dest: action for action in subparser._actions if action.option_strings}
    silenced = set()
    for group in _EXCLUSIVE.get(args.command, ()):
        if any(_flag_given(actions[dest].option_strings, argv) for dest in group):
            silenced.update(group)
    for key, raw in mapping.items():
        dest = key.replace("-", "_")
        if dest in ("help", "config") or dest not in actions:
            raise UsageError(f"unknown config key {key!r} for '{args.command}'")
        action = actions[dest]
        if dest in silenced or _flag_given(action.option_strings, argv):
            continue  # explicit flags beat config values
        if isinstance(action, argparse._StoreTrueAction):
            value = raw.lower() in ("1", "true", "yes", "on")
        else:
            try:
                value = (action.type or str)(raw)
            except (ValueError, argparse.ArgumentTypeError) as err:
                raise UsageError(f"config key {key!r}: {err}") from None
            if action.choices is not None and value not in action.choices:
                choices = ", ".join(str(c) for c in action.choices)
                raise UsageError(f"config key {key!r} must be one of: {choices}")
            if isinstance(action, argparse._AppendAction):
                value = list(getattr(args, dest) or []) + [value]
        setattr(args, dest, value)


def _spec_from(args, kind):
    widths = args.widths
    if widths is None:
        widths = tuple(1 if kind == "sudden" else 500 for _ in args.positions)
    return DriftStreamSpec(
        n_samples=args.samples,
        n_features=args.features,
        n_labels=args.labels,
        drift_positions=tuple(args.positions),
        drift_widths=tuple(widths),
        kind=kind,
        seed=args.seed,
    )


def _build_detector(args):
    if args.detector == "none":
        return None
    if args.detector == "ld3":
        return LabelDependencyDriftDetector(
            window_size=args.w, sigma_multiplier=args.t,
            anomaly_threshold=args.L, fusion=args.fusion)
    if args.detector == "ddm":
        return DDM()
    return EDDM()


def _detector_payload(args, detector):
    if detector is None:
        return {"name": "none"}
    payload = {"name": args.detector}
    payload.update(detector.get_params())
    return payload


def _load_source(args):
    if getattr(args, "stream", None):
        meta, instances = read_dataset(args.stream, labels_first=not args.labels_last)
        if meta.n_samples == 0:
            raise StreamFormatError(1, f"{args.stream} holds no instances")
        descriptor = {"source": args.stream, "n_samples": meta.n_samples,
                      "n_features": meta.n_features, "n_labels": meta.n_labels}
        return instances, meta.n_features, meta.n_labels, descriptor
    spec = _spec_from(args, args.synthetic)
    instances = list(generate_synthetic(spec))
    descriptor = {"source": f"synthetic-{spec.kind}", "n_samples": spec.n_samples,
                  "n_features": spec.n_features, "n_labels": spec.n_labels,
                  "drift_positions": list(spec.drift_positions),
                  "drift_widths": list(spec.drift_widths)}
    return instances, spec.n_features, spec.n_labels, descriptor


def _require_out(args):
    if not args.out:
        raise UsageError("--out is required (on the command line or in the config file)")


def _cmd_generate(args):
    _require_out(args)
    spec = _spec_from(args, args.kind)
    instances = list(generate_synthetic(spec))
    meta = write_dataset(args.out, instances, labels_first=not args.labels_last)
    print(f"wrote {args.out}: {meta.n_samples} instances, {meta.n_features} features, "
          f"{meta.n_labels} labels, cardinality {meta.label_cardinality:.3f}, "
          f"density {meta.label_density:.4f}")
    return 0


def _cmd_run(args):
    _require_out(args)
    if bool(args.stream) == bool(args.synthetic):
        raise UsageError("run needs exactly one stream source: --stream or --synthetic")
    instances, n_features, n_labels, descriptor = _load_source(args)
    detector = _build_detector(args)
    if args.dump_detector_input and detector is None:
        raise UsageError("--dump-detector-input needs a detector")

    fed = []
    on_step = None
    if args.dump_detector_input:
        if detector.consumes == "predicted_labels":
            def on_step(trace):
                fed.append("".join(str(int(bit)) for bit in trace.prediction))
        else:
            def on_step(trace):
                fed.append(str(trace.correct))

    model = IncrementalClassifierChain(n_labels=n_labels, n_features=n_features)
    report = prequential_run(instances, model, detector,
                             segments=args.segments, on_step=on_step)

    payload = {"schema": "labeldrift/report-v1", "stream": descriptor,
               "detector": _detector_payload(args, detector), "seed": args.seed}
    payload.update(report.to_dict())
    write_json_report(args.out, payload)
    if args.segments_out:
        write_segment_rows(args.segments_out, report.segment_series)
    if args.dump_detector_input:
        with open(args.dump_detector_input, "w", encoding="utf-8") as handle:
            handle.write("\n".join(fed) + ("\n" if fed else ""))

    drifts = ", ".join(str(p) for p in report.drift_positions) or "none"
    print(f"{descriptor['source']}: example_accuracy {report.example_accuracy:.4f}, "
          f"drifts at [{drifts}], report {args.out}")
    return 0


def _cmd_compare(args):
    _require_out(args)
    names = tuple(part.strip() for part in args.detectors.split(","))
    if len(names) < 2 or len(set(names)) != len(names):
        raise UsageError("--detectors needs at least two distinct detector names")
    unknown = [name for name in names if name not in DETECTOR_NAMES]
    if unknown:
        raise UsageError(f"unknown detectors: {', '.join(unknown)}")

    sources = []
    for path in args.stream:
        file_args = argparse.Namespace(**vars(args))
        file_args.stream = path
        sources.append(_load_source(file_args))
    if args.synthetic:
        synthetic_args = argparse.Namespace(**vars(args))
        synthetic_args.stream = None
        sources.append(_load_source(synthetic_args))
    if not sources:
        raise UsageError("compare needs at least one --stream file or --synthetic kind")

    dataset_names = [source[3]["source"] for source in sources]
    values = {metric: [] for metric in METRIC_NAMES}
    for name in names:
        per_metric = {metric: [] for metric in METRIC_NAMES}
        for instances, n_features, n_labels, _ in sources:
            cell_args = argparse.Namespace(**vars(args))
            cell_args.detector = name
            model = IncrementalClassifierChain(n_labels=n_labels, n_features=n_features)
            report = prequential_run(instances, model, _build_detector(cell_args))
            for metric, value in report.metrics().items():
                per_metric[metric].append(value)
        for metric in METRIC_NAMES:
            values[metric].append(per_metric[metric])

    distance = nemenyi_critical_distance(args.alpha, len(names), len(sources))
    tables = {}
    for metric in METRIC_NAMES:
        table = average_ranks(values[metric], methods=names, datasets=dataset_names,
                              higher_is_better=True)
        tables[metric] = {
            "values": table.values,
            "ranks": table.ranks,
            "average_ranks": table.average_ranks,
        }
    payload = {"schema": "labeldrift/compare-v1", "alpha": args.alpha,
               "critical_distance": distance, "detectors": list(names),
               "datasets": dataset_names, "tables": tables}
    write_json_report(args.out, payload)

    summary = tables["example_accuracy"]["average_ranks"]
    ranks_text = ", ".join(f"{name}={rank:.2f}" for name, rank in zip(names, summary))
    print(f"average example_accuracy ranks: {ranks_text}; CD({args.alpha}) = {distance:.3f}; "
          f"report {args.out}")
    return 0


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = build_parser()
    try:
        args = parser.parse_args(argv)
        _apply_config(args, subparsers[args.command], argv)
        return args.handler(args)
    except SystemExit as exc:  # argparse usage errors and --help
        return int(exc.code or 0)
    except UsageError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (StreamFormatError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except ValueError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
