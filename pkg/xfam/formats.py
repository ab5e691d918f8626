"""
Text formats shared by the library and the CLI.

Family file:
    n=<n>
    1 2 3        # one set per line, ascending integers
    ...
'#' starts a comment, blank lines are ignored. A tuple file holds several
families separated by lines containing only '---'; each block repeats n=.

Rank lists: "a,b;c" means R_1={a,b}, R_2={c}.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Union

from .core import Instance, RankSet, SetFamily
from .errors import FormatError, ParameterError


def parse_ranks(text: str) -> tuple[RankSet, ...]:
    groups = [g.strip() for g in text.strip().split(";")]
    if not groups or any(not g for g in groups):
        raise FormatError(f"empty rank group in {text!r}")
    try:
        return tuple(RankSet(ranks=tuple(int(x) for x in g.split(","))) for g in groups)
    except ValueError as e:
        raise FormatError(f"bad rank list {text!r}: {e}") from e


def format_ranks(ranks: Iterable[RankSet]) -> str:
    return ";".join(str(r) for r in ranks)


def parse_instance(n: int, ranks: str, t: int = 1) -> Instance:
    try:
        return Instance(n=n, t=t, ranks=parse_ranks(ranks))
    except ValueError as e:
        raise FormatError(f"bad instance n={n} ranks={ranks!r} t={t}: {e}") from e


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_family(text: str) -> SetFamily:
    lines = [s for s in (_strip(line) for line in text.splitlines()) if s]
    if not lines or not lines[0].startswith("n="):
        raise FormatError("family text must start with a line 'n=<n>'")
    try:
        n = int(lines[0][2:])
    except ValueError as e:
        raise FormatError(f"bad universe line {lines[0]!r}") from e
    sets = []
    for line in lines[1:]:
        try:
            members = [int(x) for x in line.split()]
        except ValueError as e:
            raise FormatError(f"bad set line {line!r}") from e
        if members != sorted(set(members)):
            raise FormatError(f"set line {line!r} is not strictly ascending")
        sets.append(members)
    try:
        return SetFamily.of(n, sets)
    except ParameterError as e:
        raise FormatError(str(e)) from e


def format_family(family: SetFamily, comment: str = "") -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"n={family.n}")
    lines.extend(" ".join(map(str, s.members)) for s in family)
    return "\n".join(lines) + "\n"


def parse_tuple(text: str) -> list[SetFamily]:
    blocks, current = [], []
    for line in text.splitlines():
        if line.strip() == "---":
            blocks.append("\n".join(current))
            current = []
        else:
            current.append(line)
    blocks.append("\n".join(current))
    return [parse_family(b) for b in blocks if _has_content(b)]


def _has_content(block: str) -> bool:
    return any(_strip(line) for line in block.splitlines())


def format_tuple(families: Iterable[SetFamily]) -> str:
    return "---\n".join(format_family(f) for f in families)


def read_family(path: Union[str, Path]) -> SetFamily:
    return parse_family(Path(path).read_text(encoding="utf-8"))


def read_tuple(paths: Iterable[Union[str, Path]]) -> list[SetFamily]:
    families = []
    for path in paths:
        families.extend(parse_tuple(Path(path).read_text(encoding="utf-8")))
    return families


def write_text(path: Union[str, Path], text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


@dataclass(frozen=True)
class GridSpec:
    """Inline sweep grid: "n=5..8 m=2 maxk=4 [shape=subsets|singleton]"."""

    n_values: tuple[int, ...]
    m: int
    max_k: int
    singleton: bool = False


def _int_field(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError as e:
        raise FormatError(f"{key}={value!r} is not an integer") from e


def parse_grid_spec(text: str) -> GridSpec:
    fields = {}
    for token in text.split():
        key, sep, value = token.partition("=")
        if not sep:
            raise FormatError(f"grid token {token!r} is not key=value")
        fields[key] = value
    missing = {"n", "m", "maxk"} - set(fields)
    if missing:
        raise FormatError(f"grid spec {text!r} lacks {sorted(missing)}")
    lo, sep, hi = fields["n"].partition("..")
    first = _int_field("n", lo)
    last = _int_field("n", hi) if sep else first
    if last < first:
        raise FormatError(f"empty n range {fields['n']!r}")
    shape = fields.get("shape", "subsets")
    if shape not in ("subsets", "singleton"):
        raise FormatError(f"shape must be subsets or singleton, got {shape!r}")
    return GridSpec(
        n_values=tuple(range(first, last + 1)),
        m=_int_field("m", fields["m"]),
        max_k=_int_field("maxk", fields["maxk"]),
        singleton=shape == "singleton",
    )


def parse_instance_line(line: str) -> Instance:
    """One instance per line: "n=6 ranks=3;2 [t=2]"."""
    fields = dict(token.partition("=")[::2] for token in line.split())
    if "n" not in fields or "ranks" not in fields:
        raise FormatError(f"instance line {line!r} needs n= and ranks=")
    return parse_instance(
        _int_field("n", fields["n"]),
        fields["ranks"],
        _int_field("t", fields.get("t", "1")),
    )


def parse_instances(text: str) -> list[Instance]:
    return [parse_instance_line(s) for s in (_strip(line) for line in text.splitlines()) if s]
