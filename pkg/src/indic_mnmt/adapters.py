"""Translator adapters: the boundary to an external NMT model.

Every adapter maps a list of source lines to exactly as many hypothesis
lines. The subprocess wire contract is::

    <cmd> --src XX --tgt YY   < source lines (UTF-8, LF)   > one line per input

with exit status 0 on success.
"""

from __future__ import annotations

import shlex
import subprocess
from collections import defaultdict
from pathlib import Path
from typing import Mapping, Sequence

from .core import LanguageTag, MnmtError, decode_lines, parse_language_tag, read_lines, serialize_lines

DEFAULT_TIMEOUT = 600.0


class AdapterError(MnmtError):
    def __init__(self, reason: str, detail: str = "", hop: int | None = None):
        self.reason = reason
        self.detail = detail
        self.hop = hop
        super().__init__(str(self))

    def __str__(self) -> str:
        where = f"hop {self.hop}: " if self.hop is not None else ""
        return f"{where}adapter {self.reason}" + (f" ({self.detail})" if self.detail else "")


def _check_count(lines_in: Sequence[str], lines_out: Sequence[str]) -> list[str]:
    if len(lines_out) != len(lines_in):
        raise AdapterError("line_count", f"sent {len(lines_in)} lines, got {len(lines_out)}")
    return list(lines_out)


class TranslatorAdapter:
    kind = "abstract"

    def translate(self, lines: Sequence[str], src: LanguageTag | str, tgt: LanguageTag | str) -> list[str]:
        raise NotImplementedError


class IdentityAdapter(TranslatorAdapter):
    """Echoes its input; a perfect translator when source and reference coincide."""

    kind = "identity"

    def translate(self, lines, src, tgt):
        return list(lines)


class LookupAdapter(TranslatorAdapter):
    """Answers from a table of source line -> hypothesis.

    A source line that occurs k times may carry k distinct hypotheses; within
    one call the i-th occurrence gets the i-th value (the last value repeats).
    """

    kind = "lookup"

    def __init__(self, table: Mapping[str, str | Sequence[str]] | None = None):
        self.table: dict[str, list[str]] = {}
        for k, v in (table or {}).items():
            self.table[k] = [v] if isinstance(v, str) else list(v)

    @classmethod
    def from_lines(cls, sources: Sequence[str], targets: Sequence[str]) -> LookupAdapter:
        if len(sources) != len(targets):
            raise ValueError("sources and targets differ in length")
        table: dict[str, list[str]] = defaultdict(list)
        for s, t in zip(sources, targets):
            table[s].append(t)
        return cls(table)

    def translate(self, lines, src, tgt):
        seen: dict[str, int] = defaultdict(int)
        out = []
        for line in lines:
            values = self.table.get(line)
            if values is None:
                raise AdapterError("lookup_miss", repr(line[:60]))
            i = seen[line]
            seen[line] += 1
            out.append(values[min(i, len(values) - 1)])
        return out

    def then(self, other: LookupAdapter) -> LookupAdapter:
        """Composition: this table followed by ``other``'s."""
        composed = {}
        for k, vs in self.table.items():
            composed[k] = [other.translate([v], None, None)[0] for v in vs]
        return LookupAdapter(composed)


class SubprocessAdapter(TranslatorAdapter):
    kind = "subprocess"

    def __init__(self, command: str | Sequence[str], timeout: float = DEFAULT_TIMEOUT):
        self.argv = shlex.split(command) if isinstance(command, str) else list(command)
        self.timeout = timeout

    def translate(self, lines, src, tgt):
        argv = self.argv + ["--src", parse_language_tag(src).code, "--tgt", parse_language_tag(tgt).code]
        try:
            proc = subprocess.run(argv, input=serialize_lines(lines), capture_output=True,
                                  timeout=self.timeout)
        except subprocess.TimeoutExpired:
            raise AdapterError("timeout", f"{self.timeout:g}s") from None
        except OSError as e:
            raise AdapterError("spawn_failed", str(e)) from None
        if proc.returncode != 0:
            tail = proc.stderr.decode("utf-8", "replace").strip().splitlines()[-1:] or [""]
            raise AdapterError("nonzero_exit", f"status {proc.returncode}: {tail[0]}")
        try:
            out = decode_lines(proc.stdout, "<adapter stdout>")
        except MnmtError as e:
            raise AdapterError("bad_output", str(e)) from None
        return _check_count(lines, out)


class DirectoryAdapter(TranslatorAdapter):
    """Reads precomputed hypotheses from ``<dir>/<SRC>-<TGT>.txt``."""

    kind = "directory"

    def __init__(self, path):
        self.path = Path(path)

    def translate(self, lines, src, tgt):
        f = self.path / f"{parse_language_tag(src).code}-{parse_language_tag(tgt).code}.txt"
        if not f.exists():
            raise AdapterError("missing_file", str(f))
        return _check_count(lines, read_lines(f))


__all__ = [
    "AdapterError", "DEFAULT_TIMEOUT", "DirectoryAdapter", "IdentityAdapter", "LookupAdapter",
    "SubprocessAdapter", "TranslatorAdapter",
]
