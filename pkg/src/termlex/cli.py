"""Command-line front end.

Exit status: 0 when clean, 1 when the command has findings (incoherent
concepts, a verb needing a new class, inconsistent classes or grammar rules),
2 on any input error.  Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import TermlexError
from .formats import LoadError, build_workspace, read_grammar, read_kb, read_sentences
from .grammarcheck import check_grammar
from .kr import BOTTOM
from .verbclass import Corpus, check_class_consistency, classify_verb

EXIT_OK, EXIT_FINDINGS, EXIT_INPUT = 0, 1, 2


def data_path(name: str) -> Path:
    """Path of a file shipped in ``termlex/data``."""
    return Path(str(resources.files("termlex") / "data" / name))


@dataclass(frozen=True)
class Report:
    command: str
    payload: dict
    exit_status: int = EXIT_OK

    def to_dict(self) -> dict:
        return {"command": self.command, "exit_status": self.exit_status, "payload": self.payload}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        d = json.loads(text)
        return cls(d["command"], d["payload"], d["exit_status"])


class InputError(TermlexError):
    pass


def _table(rows: list[tuple], header: tuple) -> list[str]:
    rows = [tuple(str(c) for c in r) for r in rows]
    widths = [max(len(x) for x in col) for col in zip(header, *rows)]
    out = []
    for r in [header] + rows:
        out.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return out


def _load(kb_path):
    return build_workspace(read_kb(kb_path))


def _read_file_sentences(path, label=None) -> list:
    pairs = read_sentences(path)
    if label is None:
        return pairs
    return [(label, s) for _, s in pairs]


# -- commands ------------------------------------------------------------------


def cmd_taxonomy(args) -> tuple[Report, list[str]]:
    ws = _load(args.kb)
    tax = ws.kb.taxonomy
    nodes = tax.to_dict()
    incoherent = list(tax.incoherent())
    payload = {"nodes": nodes, "incoherent": incoherent}
    rows = [(rep, ", ".join(n["parents"]) or "-", ", ".join(n["synonyms"]) or "-")
            for rep, n in nodes.items() if rep != BOTTOM]
    lines = _table(rows, ("concept", "parents", "synonyms"))
    if incoherent:
        lines.append("")
        lines.append("incoherent: " + ", ".join(incoherent))
    return Report("taxonomy", payload, EXIT_FINDINGS if incoherent else EXIT_OK), lines


def cmd_classify_sentence(args) -> tuple[Report, list[str]]:
    ws = _load(args.kb)
    reports = []
    for label, s in _read_file_sentences(args.sentences):
        r = ws.classifier.classify_sentence(s).to_dict()
        r["label"] = label
        reports.append(r)
    lines = []
    for r in reports:
        head = f"{r['sentence']}: {r['text'] or r['verb']}"
        if r["label"]:
            head += f"  [{r['label']}]"
        lines.append(head)
        lines.append(f"  subcategorization  {r['subcategorization']}")
        lines.append(f"  alternations       {', '.join(r['alternations']) or '-'}")
        for ev in r["events"]:
            args_text = ", ".join(f"{a}={n}" for a, n in ev["arguments"].items())
            lines.append(f"  {ev['alternation']}: senses {', '.join(ev['senses'])} ({args_text})")
    return Report("classify-sentence", {"sentences": reports}), lines


def cmd_classify_verb(args) -> tuple[Report, list[str]]:
    ws = _load(args.kb)
    pairs = []
    if args.sentences:
        pairs += _read_file_sentences(args.sentences)
    if args.good:
        pairs += _read_file_sentences(args.good, "good")
    if args.bad:
        pairs += _read_file_sentences(args.bad, "bad")
    unlabeled = [s.id for label, s in pairs if label not in ("good", "bad")]
    if unlabeled:
        raise InputError(f"sentences without a good/bad label: {', '.join(unlabeled)}")
    lemma = args.lemma
    if lemma is None:
        lemmas = sorted({s.verb for _, s in pairs})
        if len(lemmas) != 1:
            raise InputError("--lemma is required when the corpus is empty or mixes verbs")
        lemma = lemmas[0]
    try:
        corpus = Corpus(lemma, [s for l, s in pairs if l == "good"], [s for l, s in pairs if l == "bad"])
    except ValueError as e:
        raise InputError(str(e)) from None
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        result = classify_verb(ws.classifier, corpus, ws.classes.values())
    payload = result.to_dict()
    payload["warnings"] = [str(w.message) for w in caught]
    lines = [f"verb {lemma}"]
    if result.matches:
        lines.append(f"  classes   {', '.join(result.matches)}")
    else:
        p = result.proposal
        lines.append("  classes   none; a new class is needed")
        lines.append(f"  good      {', '.join(p.good) or '-'}")
        lines.append(f"  bad       {', '.join(p.bad) or '-'}")
        lines.append(f"  bare bad  {', '.join(p.bad_subcategorizations) or '-'}")
    for name, reasons in result.failures:
        for reason in reasons:
            lines.append(f"  not {name}: {reason}")
    lines.extend(f"warning: {w}" for w in payload["warnings"])
    return Report("classify-verb", payload, EXIT_FINDINGS if result.new_class else EXIT_OK), lines


def cmd_check_classes(args) -> tuple[Report, list[str]]:
    ws = _load(args.kb)
    issues = check_class_consistency(ws.classes.values(), ws.classifier.alternations)
    payload = {"classes": sorted(ws.classes), "issues": [i.to_dict() for i in issues]}
    lines = [f"{i.severity}: {i.message}" for i in issues] or [f"{len(ws.classes)} classes, no issues"]
    failed = any(i.severity == "error" for i in issues)
    return Report("check-classes", payload, EXIT_FINDINGS if failed else EXIT_OK), lines


def cmd_check_grammar(args) -> tuple[Report, list[str]]:
    doc = read_grammar(args.rules)
    reports = check_grammar(doc.rules, depth=args.depth, features=doc.features)
    payload = {"depth": args.depth, "rules": len(doc.rules), "reports": [r.to_dict() for r in reports]}
    lines = [f"{r.severity}: {r.message}" for r in reports] or [f"{len(doc.rules)} rules, consistent"]
    failed = any(r.severity == "error" for r in reports)
    return Report("check-grammar", payload, EXIT_FINDINGS if failed else EXIT_OK), lines


COMMANDS = {
    "taxonomy": cmd_taxonomy,
    "classify-sentence": cmd_classify_sentence,
    "classify-verb": cmd_classify_verb,
    "check-classes": cmd_check_classes,
    "check-grammar": cmd_check_grammar,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="termlex", description="Terminological lexicon tools.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_kb(p):
        p.add_argument("--kb", type=Path, default=None,
                       help="knowledge-base file (default: the bundled pour.kb)")
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        return p

    with_kb(sub.add_parser("taxonomy", help="print the classified concept hierarchy"))
    p = with_kb(sub.add_parser("classify-sentence", help="classify sentences by subcategorization and alternation"))
    p.add_argument("--sentences", type=Path, required=True)
    p = with_kb(sub.add_parser("classify-verb", help="match a verb's corpus against the verb classes"))
    p.add_argument("--good", type=Path)
    p.add_argument("--bad", type=Path)
    p.add_argument("--sentences", type=Path, help="file with good/bad sections")
    p.add_argument("--lemma")
    with_kb(sub.add_parser("check-classes", help="report contradictory or duplicated class definitions"))
    p = sub.add_parser("check-grammar", help="find grammar rules whose feature equations cannot unify")
    p.add_argument("--rules", type=Path, required=True)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
    return parser


def run(argv: list[str] | None = None) -> tuple[Report | None, str, str]:
    """Execute a command; returns (report, stdout text, stderr text)."""
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "kb", "unset") is None:
        args.kb = data_path("pour.kb")
    if args.command == "classify-verb" and not (args.good or args.bad or args.sentences):
        parser.error("classify-verb needs --sentences or --good/--bad")
    if args.command == "check-grammar" and args.depth < 1:
        parser.error("--depth must be at least 1")
    try:
        report, lines = COMMANDS[args.command](args)
    except (TermlexError, LoadError, OSError, UnicodeDecodeError) as e:
        return None, "", f"termlex {args.command}: {e}\n"
    if args.format == "json":
        return report, report.to_json(), ""
    return report, "".join(line + "\n" for line in lines), ""


def main(argv: list[str] | None = None) -> int:
    report, out, err = run(argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return EXIT_INPUT if report is None else report.exit_status


if __name__ == "__main__":
    sys.exit(main())
