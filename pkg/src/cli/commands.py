"""
tak コマンドの実装（check / eval / search / pushout / fmt）

終了コード: 0 成功・真, 1 却下・偽・探索し尽くした, 2 使い方や入力の誤り
"""
import argparse
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from ..core.amalgam import cospan_from_doc, is_disjoint, joint_theory, pushout
from ..core.errors import DocumentNotFound, TakError
from ..core.file_operations import DocumentLoader, next_free_path, write_text
from ..core.interpretation import check_kleene_axioms, satisfies
from ..core.model_search import bounded_model_search
from ..core.proof_checker import check_proof
from ..models.documents import CospanDoc, ModelDoc, TheoryDoc
from ..models.model import KleeneModel, plain_model, standard_kleene
from ..models.proof import ProofDoc, Verdict
from ..models.run_config import Mode, Ruleset, RunConfig, SemanticsMode
from ..surface.parser import parse_sentence
from ..surface.printer import pretty, pretty_model, pretty_theory


logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FALSE, EXIT_ERROR = 0, 1, 2

COMMANDS = ("check", "eval", "search", "pushout", "fmt")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tak", description="Transition Algebra proof kernel and TA_k model workbench")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", help="log progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    check = sub.add_parser("check", parents=[common], help="check proof scripts")
    check.add_argument("files", nargs="*", type=Path)
    check.add_argument("--theory", type=Path)
    check.add_argument("--mode", choices=[m.value for m in Mode])
    check.add_argument("--rules", choices=[r.value for r in Ruleset])
    check.add_argument("--jobs", type=int, default=1)

    evaluate = sub.add_parser("eval", parents=[common], help="evaluate a sentence in a model")
    evaluate.add_argument("model", type=Path)
    evaluate.add_argument("sentence")
    evaluate.add_argument("--theory", type=Path)
    evaluate.add_argument("--semantics", choices=[s.value for s in SemanticsMode], default="ta")

    search = sub.add_parser("search", parents=[common], help="search for a finite model")
    search.add_argument("theory", type=Path)
    search.add_argument("--refute", action="append", default=[])
    search.add_argument("--bound", type=int, default=3)
    search.add_argument("--semantics", choices=[s.value for s in SemanticsMode], default="ta")
    search.add_argument("--out", type=Path)

    push = sub.add_parser("pushout", parents=[common], help="compute a signature pushout")
    push.add_argument("cospan", type=Path)
    push.add_argument("--out", type=Path)

    fmt = sub.add_parser("fmt", parents=[common], help="pretty-print a document")
    fmt.add_argument("file", type=Path)
    fmt.add_argument("--out", type=Path)
    return parser


def to_config(args: argparse.Namespace) -> RunConfig:
    files: Tuple[Path, ...] = ()
    theory = None
    sentence = None
    match args.command:
        case "check":
            files = tuple(args.files)
            theory = args.theory
        case "eval":
            files = (args.model,)
            theory = args.theory
            sentence = args.sentence
        case "search":
            files = (args.theory,)
        case "pushout":
            files = (args.cospan,)
        case "fmt":
            files = (args.file,)
    return RunConfig(
        command=args.command,
        files=files,
        theory=theory,
        mode=Mode(args.mode) if getattr(args, "mode", None) else None,
        ruleset=Ruleset(args.rules) if getattr(args, "rules", None) else None,
        semantics=SemanticsMode(getattr(args, "semantics", "ta")),
        bound=getattr(args, "bound", 3),
        out=getattr(args, "out", None),
        refute=tuple(getattr(args, "refute", ())),
        sentence=sentence,
        verbose=args.verbose,
        jobs=getattr(args, "jobs", 1),
    )


def _loader(config: RunConfig) -> DocumentLoader:
    loader = DocumentLoader(search_dirs=[Path.cwd()])
    if config.theory is not None:
        loader.register(loader.load_theory(config.theory))
    return loader


def _expect(doc, kind, path: Path):
    if not isinstance(doc, kind):
        raise DocumentNotFound(f"{path}: expected a {kind.__name__.removesuffix('Doc').lower()} document")
    return doc


def _emit(text: str, out: Optional[Path], directory_name: Tuple[str, str] = ("out", ".txt")) -> None:
    """out が無ければ標準出力へ、ディレクトリなら重ならない名前でその中へ書く"""
    if out is None:
        sys.stdout.write(text)
        return
    if out.is_dir():
        out = next_free_path(out, *directory_name)
    path = write_text(out, text)
    print(f"wrote {path}")


# ---- check ----

def cmd_check(config: RunConfig) -> int:
    loader = _loader(config)
    jobs: List[Tuple[ProofDoc, TheoryDoc]] = []
    for path in config.files:
        doc = _expect(loader.load(path), ProofDoc, path)
        theory = loader.resolve_theory(doc.theory, path.parent)
        jobs.append((doc, theory))

    def run_one(job: Tuple[ProofDoc, TheoryDoc]) -> Verdict:
        doc, theory = job
        return check_proof(doc, theory, config.mode, config.ruleset)

    with ThreadPoolExecutor(max_workers=config.jobs) as executor:
        verdicts = list(executor.map(run_one, jobs))
    for verdict in verdicts:
        print(verdict.render())
    accepted = sum(1 for v in verdicts if v.accepted)
    print(f"{len(verdicts)} proofs, {accepted} accepted")
    return EXIT_OK if accepted == len(verdicts) else EXIT_FALSE


# ---- eval ----

def cmd_eval(config: RunConfig) -> int:
    loader = _loader(config)
    path = config.files[0]
    doc = _expect(loader.load(path), ModelDoc, path)
    theory = loader.resolve_theory(doc.theory, path.parent)
    phi = parse_sentence(config.sentence, theory)
    model = doc.model
    if config.semantics is SemanticsMode.TAK:
        if not isinstance(model, KleeneModel):
            model = standard_kleene(model)
        for problem in check_kleene_axioms(model):
            logger.warning("%s: %s", path, problem)
    else:
        model = plain_model(model)
    value = satisfies(model, phi, config.quantifier_budget)
    print("true" if value else "false")
    return EXIT_OK if value else EXIT_FALSE


# ---- search ----

def cmd_search(config: RunConfig) -> int:
    loader = _loader(config)
    path = config.files[0]
    theory = _expect(loader.load(path), TheoryDoc, path)
    refute = [parse_sentence(text, theory) for text in config.refute]
    result = bounded_model_search(theory.signature, theory.sentences, refute, config.bound, config.semantics,
                                  config.search_budget, config.quantifier_budget)
    if result.exhausted:
        print(f"exhausted({result.bound})")
        return EXIT_FALSE
    name = f"{theory.name}_model"
    _emit(pretty_model(ModelDoc(name, theory.name, result.model)), config.out, (name, ".tam"))
    return EXIT_OK


# ---- pushout ----

def _class_rows(cospan_doc: CospanDoc, classes) -> List[str]:
    sides = (cospan_doc.left, cospan_doc.right)
    rows = []
    for name in sorted(classes):
        members = ", ".join(f"{sides[side]}.{symbol}" for side, symbol in classes[name])
        rows.append(f"  {name} <- {members}")
    return rows


def cmd_pushout(config: RunConfig) -> int:
    loader = _loader(config)
    path = config.files[0]
    doc = _expect(loader.load(path), CospanDoc, path)
    cospan, left, right = cospan_from_doc(doc, lambda name: loader.resolve_theory(name, path.parent))
    result = pushout(cospan)
    sig = result.signature
    lines = [f"pushout {doc.name}"]
    for title, names in (("sorts", sig.sorts), ("ops", [f.name for f in sig.funcs]),
                         ("labels", [l.name for l in sig.labels])):
        lines.append(f"{title}:")
        lines.extend(_class_rows(doc, {n: result.classes[n] for n in names}))
    disjoint = is_disjoint(cospan)
    lines.append("disjoint: yes" if disjoint.disjoint else f"disjoint: no (witness {disjoint.witness})")
    print("\n".join(lines))
    if config.out is not None:
        joint = joint_theory(cospan, result, left, right)
        _emit(pretty_theory(joint), config.out, (joint.name, ".ta"))
    return EXIT_OK


# ---- fmt ----

def cmd_fmt(config: RunConfig) -> int:
    loader = _loader(config)
    path = config.files[0]
    _emit(pretty(loader.load(path)), config.out, (path.stem, path.suffix))
    return EXIT_OK


HANDLERS = {
    "check": cmd_check,
    "eval": cmd_eval,
    "search": cmd_search,
    "pushout": cmd_pushout,
    "fmt": cmd_fmt,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """コマンドラインを実行して終了コードを返す"""
    try:
        args = build_parser().parse_args(argv)
    except UsageError as e:
        print(f"tak: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except SystemExit as e:
        return int(e.code or 0)
    config = to_config(args)
    problems = config.validate()
    if problems:
        for problem in problems:
            print(f"tak: error: {problem}", file=sys.stderr)
        return EXIT_ERROR
    try:
        return HANDLERS[config.command](config)
    except TakError as e:
        print(f"tak: {e}", file=sys.stderr)
        return EXIT_ERROR
