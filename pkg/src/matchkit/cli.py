"""Command-line front end: parse, validate, classify, verify, witness, generate."""

from __future__ import annotations

import argparse
import sys

from ._core import AgentId, Mode, iter_bits
from .domination import SET_KEYS, classify, stability_sets
from .errors import MarketSyntaxError, MatchkitError
from .gen import GenConfig, Strategy, gen_market, subseed
from .model import Market, Matching, enumerate_matchings, make_matching, make_market
from .theorems import THEOREMS, TheoremStatus, check_theorem, theorem_ids
from .witness import (
    blocking_pair_from_quasi_core_violation_m21,
    domination_from_blocking_pair_m21,
    domination_from_double_quasi_m2m,
    domination_from_firm_block_m21,
    setwise_domination_from_qw_violation_m2m,
)

_MODES = {m.value: m for m in Mode}


# -- market file format --------------------------------------------------------


def _strip_comment(line: str) -> str:
    cut = line.find("#")
    return line if cut < 0 else line[:cut]


def _parse_braced_set(line_no: int, line: str, start: int) -> tuple[frozenset[str], int]:
    """Parse one '{a b}' starting at index `start`; return (labels, index past '}')."""
    if start >= len(line) or line[start] != "{":
        raise MarketSyntaxError(line_no, start + 1, "expected '{'")
    end = line.find("}", start)
    if end < 0:
        raise MarketSyntaxError(line_no, len(line), "unterminated '{'")
    inner = line[start + 1 : end]
    if "{" in inner:
        raise MarketSyntaxError(line_no, start + 2 + inner.find("{"), "nested '{'")
    labels = inner.split()
    if len(set(labels)) != len(labels):
        raise MarketSyntaxError(line_no, start + 1, "duplicate label inside set")
    return frozenset(labels), end + 1


def _parse_pref_line(line_no: int, line: str, offset: int) -> list[frozenset[str]]:
    """Parse '{a b} > {b} > {}' into a ranking, scanning `line` from `offset`."""
    ranking = []
    pos = offset
    while True:
        while pos < len(line) and line[pos].isspace():
            pos += 1
        if pos >= len(line):
            break
        entry, pos = _parse_braced_set(line_no, line, pos)
        ranking.append(entry)
        while pos < len(line) and line[pos].isspace():
            pos += 1
        if pos >= len(line):
            break
        if line[pos] != ">":
            raise MarketSyntaxError(line_no, pos + 1, "expected '>' between sets")
        pos += 1
    if not ranking:
        raise MarketSyntaxError(line_no, offset + 1, "empty preference ranking")
    return ranking


def _parse_choice_row(line_no: int, line: str) -> tuple[frozenset[str], frozenset[str]]:
    pos = 0
    while pos < len(line) and line[pos].isspace():
        pos += 1
    subset, pos = _parse_braced_set(line_no, line, pos)
    while pos < len(line) and line[pos].isspace():
        pos += 1
    if line[pos : pos + 2] != "->":
        raise MarketSyntaxError(line_no, pos + 1, "expected '->' after the subset")
    pos += 2
    while pos < len(line) and line[pos].isspace():
        pos += 1
    chosen, pos = _parse_braced_set(line_no, line, pos)
    if line[pos:].strip():
        raise MarketSyntaxError(line_no, pos + 1, "unexpected text after the chosen set")
    return subset, chosen


def parse_market(text: str) -> Market:
    """Parse the line-oriented market format and build a validated market.

    Grammar: a `market <mode>` header, `firms:`/`workers:` rosters, then one
    `pref <label>: {..} > {..}` line or one `choice <label>:` block (indented
    `{..} -> {..}` rows) per agent. '#' starts a comment anywhere.
    """
    mode: Mode | None = None
    firms: list[str] | None = None
    workers: list[str] | None = None
    data: dict[str, object] = {}
    open_choice: str | None = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        if not line.strip():
            continue
        indented = line[0].isspace()

        if indented:
            if open_choice is None:
                raise MarketSyntaxError(line_no, 1, "indented row outside a choice block")
            subset, chosen = _parse_choice_row(line_no, line)
            table = data[open_choice]
            if subset in table:
                raise MarketSyntaxError(
                    line_no, 1, f"duplicate subset row in choice block of {open_choice!r}"
                )
            table[subset] = chosen
            continue

        open_choice = None
        head, _, rest = line.partition(":")
        head = head.strip()

        if mode is None:
            tokens = line.split()
            if len(tokens) != 2 or tokens[0] != "market" or tokens[1] not in _MODES:
                raise MarketSyntaxError(
                    line_no, 1, "expected header 'market many-to-one' or 'market many-to-many'"
                )
            mode = _MODES[tokens[1]]
            continue

        if head == "firms" or head == "workers":
            if (firms if head == "firms" else workers) is not None:
                raise MarketSyntaxError(line_no, 1, f"duplicate '{head}:' roster")
            labels = rest.split()
            if not labels:
                raise MarketSyntaxError(line_no, len(line) + 1, f"empty '{head}:' roster")
            if head == "firms":
                firms = labels
            else:
                workers = labels
            continue

        if head.startswith("pref ") or head.startswith("choice "):
            kind, label = head.split(None, 1)
            label = label.strip()
            if " " in label:
                raise MarketSyntaxError(line_no, 1, f"malformed agent label {label!r}")
            if label in data:
                raise MarketSyntaxError(line_no, 1, f"duplicate block for agent {label!r}")
            if kind == "pref":
                data[label] = _parse_pref_line(line_no, line, line.index(":") + 1)
            else:
                if rest.strip():
                    raise MarketSyntaxError(
                        line_no, line.index(":") + 2, "choice header takes no inline rows"
                    )
                data[label] = {}
                open_choice = label
            continue

        raise MarketSyntaxError(line_no, 1, f"unrecognized line {line.strip()!r}")

    if mode is None:
        raise MarketSyntaxError(1, 1, "missing 'market <mode>' header")
    if firms is None:
        raise MarketSyntaxError(1, 1, "missing 'firms:' roster")
    if workers is None:
        raise MarketSyntaxError(1, 1, "missing 'workers:' roster")
    return make_market(firms, workers, mode, data)


def _render_set(universe: tuple[AgentId, ...], mask: int) -> str:
    return "{" + " ".join(universe[i].label for i in iter_bits(mask)) + "}"


def serialize_market(market: Market) -> str:
    """Canonical text form; parse(serialize(m)) == m."""
    lines = [f"market {market.mode.value}"]
    lines.append("firms: " + " ".join(a.label for a in market.firms))
    lines.append("workers: " + " ".join(a.label for a in market.workers))
    for i, f in enumerate(market.firms):
        lines.append(f"choice {f.label}:")
        for mask in range(1 << market.n_workers):
            lines.append(
                f"  {_render_set(market.workers, mask)} -> "
                f"{_render_set(market.workers, market._ftab[i][mask])}"
            )
    if market.mode is Mode.MANY_TO_MANY:
        for j, w in enumerate(market.workers):
            lines.append(f"choice {w.label}:")
            for mask in range(1 << market.n_firms):
                lines.append(
                    f"  {_render_set(market.firms, mask)} -> "
                    f"{_render_set(market.firms, market._wtab[j][mask])}"
                )
    else:
        for w, pref in zip(market.workers, market._wprefs):
            entries = " > ".join(_render_set(market.firms, m) for m in pref._masks)
            lines.append(f"pref {w.label}: {entries}")
    return "\n".join(lines) + "\n"


def parse_matching_spec(market: Market, text: str) -> Matching:
    """Parse 'f1:w2 w3; f2:w1' (either side may key a group; unlisted = unmatched)."""
    text = text.strip()
    if not text or text == "(empty)":
        return Matching(market, (0,) * market.n_firms)
    pairs = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        left, sep, right = part.partition(":")
        if not sep:
            raise MarketSyntaxError(1, 1, f"expected 'agent: partners' in {part!r}")
        owner = left.strip()
        for token in right.split():
            pairs.append((owner, token))
    return make_matching(market, pairs)


# -- rendering helpers ----------------------------------------------------------


def _render_witness(w) -> str:
    if w is None:
        return ""
    if isinstance(w, AgentId):
        return w.label
    render = getattr(w, "render", None)
    return render() if render else str(w)


def _load_market(path: str) -> Market:
    with open(path, encoding="utf-8") as fh:
        return parse_market(fh.read())


def _parse_labels(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split() if t]


# -- subcommand handlers --------------------------------------------------------


def handle_validate(args) -> int:
    market = _load_market(args.file)
    if args.tsv:
        print(f"ok\t{market.mode.value}\t{market.n_firms}\t{market.n_workers}")
    else:
        print(
            f"ok: {market.mode.value} market with {market.n_firms} firms "
            f"and {market.n_workers} workers"
        )
    return 0


def handle_classify(args) -> int:
    market = _load_market(args.file)
    mu = parse_matching_spec(market, args.match)
    record = classify(market, mu)
    bits = record.as_dict()
    if args.tsv:
        print("set\tmember\twitness")
        for key in SET_KEYS:
            tag = "yes" if bits[key] else "no"
            print(f"{key}\t{tag}\t{_render_witness(record.witnesses.get(key))}")
    else:
        print(f"matching: {mu.render()}")
        for key in SET_KEYS:
            if bits[key]:
                print(f"  {key}: yes")
            else:
                print(f"  {key}: no  [{_render_witness(record.witnesses.get(key))}]")
    return 0


def handle_sets(args) -> int:
    market = _load_market(args.file)
    sets = stability_sets(market)
    universe = enumerate_matchings(market)
    members = {key: set(sets[key]) for key in SET_KEYS}
    results = [
        check_theorem(THEOREMS[tid], market, sets, universe) for tid in theorem_ids("all")
    ]
    if args.tsv:
        print("idx\tmatching\t" + "\t".join(SET_KEYS))
        for idx, mu in enumerate(universe):
            flags = "\t".join("1" if mu in members[k] else "0" for k in SET_KEYS)
            print(f"{idx}\t{mu.render()}\t{flags}")
        print()
        print("set\tcount")
        for key in SET_KEYS:
            print(f"{key}\t{len(sets[key])}")
        print()
        print("theorem\tstatus\twitness")
        for r in results:
            extra = _render_witness(r.counterexamples[0] if r.counterexamples else None)
            print(f"{r.theorem.id}\t{r.status.value}\t{extra}")
    else:
        print(
            f"market: {market.mode.value}, {market.n_firms} firms x "
            f"{market.n_workers} workers, {len(universe)} matchings"
        )
        print()
        width = max(len(k) for k in SET_KEYS)
        header = " ".join(k.ljust(width) for k in SET_KEYS)
        print(f"{'idx':>5}  {header}  matching")
        for idx, mu in enumerate(universe):
            flags = " ".join(
                ("x" if mu in members[k] else ".").ljust(width) for k in SET_KEYS
            )
            print(f"{idx:>5}  {flags}  {mu.render()}")
        print()
        print("counts: " + "  ".join(f"{k}={len(sets[k])}" for k in SET_KEYS))
        print()
        print("inclusions:")
        for r in results:
            if r.status is TheoremStatus.FAILS:
                first = _render_witness(r.counterexamples[0])
                print(
                    f"  {r.theorem.id}: FAILS ({len(r.counterexamples)} counterexamples; "
                    f"first {first}) — {r.theorem.statement}"
                )
            else:
                print(f"  {r.theorem.id}: {r.status.value} — {r.theorem.statement}")
    return 0


def _verify_corpus(args) -> list[tuple[str, Market]]:
    if args.file is not None:
        return [(args.file, _load_market(args.file))]
    out = []
    for k in range(args.count):
        if args.strategy == "mixed":
            strategy = Strategy.QUOTA_PRIORITY if k % 2 == 0 else Strategy.SUBSET_REJECTION
        else:
            strategy = Strategy(args.strategy)
        config = GenConfig(
            seed=subseed(args.seed, k),
            n_firms=args.firms,
            n_workers=args.workers,
            mode=_MODES[args.mode],
            quota_range=(args.quota_lo, args.quota_hi),
            acceptability_prob=args.accept_prob,
            strategy=strategy,
        )
        out.append((f"gen[{k}]", gen_market(config)))
    return out


def handle_verify(args) -> int:
    if args.file is None and not args.gen:
        print("error: verify needs a market file or --gen", file=sys.stderr)
        return 2
    corpus = _verify_corpus(args)
    ids = theorem_ids(args.theorems)
    evaluated = [
        (name, market, stability_sets(market), enumerate_matchings(market))
        for name, market in corpus
    ]
    rows = []
    failed = False
    for tid in ids:
        theorem = THEOREMS[tid]
        status = TheoremStatus.NOT_APPLICABLE
        fail_name = fail_witness = None
        strict_name = strict_witness = None
        counterexamples = 0
        for name, market, sets, universe in evaluated:
            if not theorem.applies_to(market.mode):
                continue
            result = check_theorem(theorem, market, sets, universe)
            if status is TheoremStatus.NOT_APPLICABLE:
                status = TheoremStatus.HOLDS
            if result.status is TheoremStatus.FAILS:
                status = TheoremStatus.FAILS
                counterexamples += len(result.counterexamples)
                if fail_name is None:
                    fail_name, fail_witness = name, result.counterexamples[0]
            elif strict_name is None and result.strict_witness is not None:
                strict_name, strict_witness = name, result.strict_witness
        rows.append((theorem, status, fail_name, fail_witness, strict_name, strict_witness, counterexamples))
        failed = failed or status is TheoremStatus.FAILS
    if args.tsv:
        print("theorem\tstatus\tmarket\twitness")
        for theorem, status, fname, fwit, sname, swit, _ in rows:
            if status is TheoremStatus.FAILS:
                print(f"{theorem.id}\t{status.value}\t{fname}\t{fwit.render()}")
            elif swit is not None:
                print(f"{theorem.id}\t{status.value}\t{sname}\t{swit.render()}")
            else:
                print(f"{theorem.id}\t{status.value}\t\t")
    else:
        for theorem, status, fname, fwit, sname, swit, count in rows:
            if status is TheoremStatus.FAILS:
                print(
                    f"{theorem.id}: FAILS on {fname} ({count} counterexamples; "
                    f"first {fwit.render()}) — {theorem.statement}"
                )
            elif status is TheoremStatus.HOLDS and swit is not None:
                print(
                    f"{theorem.id}: HOLDS (strict on {sname}; witness {swit.render()}) "
                    f"— {theorem.statement}"
                )
            else:
                print(f"{theorem.id}: {status.value} — {theorem.statement}")
    return 1 if failed else 0


_WITNESS_FLAGS = {
    "block-pair": ("pair",),
    "firm-block": ("firm", "add"),
    "quasi-core-pair": ("dominating", "coalition", "worker"),
    "qw-setwise": ("worker", "add"),
    "double-quasi": ("pair",),
}


def handle_witness(args) -> int:
    for flag in _WITNESS_FLAGS[args.kind]:
        if getattr(args, flag) is None:
            print(f"error: --kind {args.kind} requires --{flag}", file=sys.stderr)
            return 2
    market = _load_market(args.file)
    mu = parse_matching_spec(market, args.match)
    kind = args.kind
    if kind == "block-pair":
        pair = _parse_labels(args.pair)
        report = domination_from_blocking_pair_m21(market, mu, tuple(pair))
    elif kind == "firm-block":
        report = domination_from_firm_block_m21(market, mu, args.firm, _parse_labels(args.add))
    elif kind == "quasi-core-pair":
        dominating = parse_matching_spec(market, args.dominating)
        pair = blocking_pair_from_quasi_core_violation_m21(
            market, mu, dominating, _parse_labels(args.coalition), args.worker
        )
        if args.tsv:
            print("kind\tpair")
            print(f"{kind}\t{pair.render()}")
        else:
            print(f"blocking pair {pair.render()} (worker is matched)")
        return 0
    elif kind == "qw-setwise":
        report = setwise_domination_from_qw_violation_m2m(
            market, mu, args.worker, _parse_labels(args.add)
        )
    else:  # double-quasi
        pair = _parse_labels(args.pair)
        report = domination_from_double_quasi_m2m(market, mu, tuple(pair))
    if args.tsv:
        print("kind\tdescription\tmatching\tcoalition\tverified")
        print(
            f"{kind}\t{report.description}\t{report.matching.render()}\t"
            f"{report.coalition.render()}\t{'yes' if report.verified else 'no'}"
        )
    else:
        print(report.render())
    return 0


def handle_gen(args) -> int:
    config = GenConfig(
        seed=args.seed,
        n_firms=args.firms,
        n_workers=args.workers,
        mode=_MODES[args.mode],
        quota_range=(args.quota_lo, args.quota_hi),
        acceptability_prob=args.accept_prob,
        strategy=Strategy(args.strategy),
    )
    text = serialize_market(gen_market(config))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ---------------------------------------------------------------------


def _add_gen_flags(sub, require_seed: bool):
    sub.add_argument("--seed", type=int, required=require_seed, default=1)
    sub.add_argument("--firms", type=int, default=3)
    sub.add_argument("--workers", type=int, default=3)
    sub.add_argument("--mode", choices=sorted(_MODES), default="many-to-one")
    sub.add_argument("--quota-lo", type=int, default=1)
    sub.add_argument("--quota-hi", type=int, default=2)
    sub.add_argument("--accept-prob", type=float, default=0.8)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchkit",
        description="Stability analysis for two-sided matching markets.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse a market file and run all validators")
    p.add_argument("file")
    p.add_argument("--tsv", action="store_true")
    p.set_defaults(handler=handle_validate)

    p = sub.add_parser("classify", help="classify one matching in all stability notions")
    p.add_argument("file")
    p.add_argument("--match", required=True, help="matching spec, e.g. 'f1:w2 w3; f2:w1'")
    p.add_argument("--tsv", action="store_true")
    p.set_defaults(handler=handle_classify)

    p = sub.add_parser("sets", help="materialize every stability set over the enumeration")
    p.add_argument("file")
    p.add_argument("--tsv", action="store_true")
    p.set_defaults(handler=handle_sets)

    p = sub.add_parser("verify", help="check the theorem registry on a market or corpus")
    p.add_argument("file", nargs="?", default=None)
    p.add_argument("--theorems", default="all", help="all | m21 | m2m | comma-separated ids")
    p.add_argument("--gen", action="store_true", help="verify a generated corpus instead")
    p.add_argument("--count", type=int, default=20)
    p.add_argument(
        "--strategy",
        choices=["quota-priority", "subset-rejection", "mixed"],
        default="quota-priority",
    )
    _add_gen_flags(p, require_seed=False)
    p.add_argument("--tsv", action="store_true")
    p.set_defaults(handler=handle_verify)

    p = sub.add_parser("witness", help="run a constructive translation on a matching")
    p.add_argument("file")
    p.add_argument("--match", required=True)
    p.add_argument(
        "--kind",
        required=True,
        choices=["block-pair", "firm-block", "quasi-core-pair", "qw-setwise", "double-quasi"],
    )
    p.add_argument("--pair", help="'f1,w1' for block-pair / double-quasi")
    p.add_argument("--firm", help="firm label for firm-block")
    p.add_argument("--add", help="comma-separated partners for firm-block / qw-setwise")
    p.add_argument("--worker", help="worker label for quasi-core-pair / qw-setwise")
    p.add_argument("--dominating", help="matching spec for quasi-core-pair")
    p.add_argument("--coalition", help="comma-separated agents for quasi-core-pair")
    p.add_argument("--tsv", action="store_true")
    p.set_defaults(handler=handle_witness)

    p = sub.add_parser("gen", help="generate a seeded market file")
    p.add_argument(
        "--strategy",
        choices=["quota-priority", "subset-rejection"],
        default="quota-priority",
    )
    _add_gen_flags(p, require_seed=True)
    p.add_argument("--out", default=None)
    p.set_defaults(handler=handle_gen)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except MarketSyntaxError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except MatchkitError as err:
        print(f"error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
