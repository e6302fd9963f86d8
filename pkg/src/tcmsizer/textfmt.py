"""Line-oriented ``[section]`` / ``key=value`` text used by bundle and plan files."""

import re
from dataclasses import dataclass, field

from .errors import ParseError

_SECTION = re.compile(r"^\[([A-Za-z0-9_.\-]+)\]$")


@dataclass
class Section:
    name: str
    line: int
    fields: dict = field(default_factory=dict)
    lines: dict = field(default_factory=dict)

    def get(self, key, default=None):
        return self.fields.get(key, default)

    def require(self, key, error=ParseError):
        if key not in self.fields:
            raise error(f"section [{self.name}] is missing {key!r}", line=self.line, field=f"{self.name}.{key}")
        return self.fields[key]

    def number(self, key, default=None):
        if key not in self.fields:
            if default is not None:
                return default
            self.require(key)
        return parse_float(self.fields[key], self.lines[key], f"{self.name}.{key}")

    def numbers(self, key):
        text = self.require(key)
        return [
            parse_float(item, self.lines[key], f"{self.name}.{key}")
            for item in text.split(",")
        ]


def parse_float(text, line=None, field_name=None):
    try:
        value = float(text.strip())
    except ValueError:
        raise ParseError(f"not a number: {text.strip()!r}", line=line, field=field_name) from None
    if value != value or value in (float("inf"), float("-inf")):
        raise ParseError(f"non-finite number: {text.strip()!r}", line=line, field=field_name)
    return value


def parse_sections(text):
    """Split ``text`` into ordered sections. Blank and ``#`` lines are skipped."""
    sections = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = _SECTION.match(line)
        if m:
            name = m.group(1)
            if name in sections:
                raise ParseError(f"duplicate section [{name}]", line=lineno)
            current = sections[name] = Section(name, lineno)
            continue
        if current is None:
            raise ParseError("field outside any section", line=lineno)
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ParseError(f"expected key=value, got {line!r}", line=lineno)
        if key in current.fields:
            raise ParseError(f"duplicate field {key!r}", line=lineno, field=f"{current.name}.{key}")
        current.fields[key] = value.strip()
        current.lines[key] = lineno
    return sections


def fmt_float(x):
    """17 significant digits; parses back to the identical double."""
    return format(float(x), ".17g")


def render_sections(sections):
    """Inverse of :func:`parse_sections` for ``[(name, [(key, value), ...]), ...]``."""
    out = []
    for name, items in sections:
        if out:
            out.append("")
        out.append(f"[{name}]")
        for key, value in items:
            if "\n" in value or "\r" in value:
                raise ValueError(f"field {name}.{key} must be single-line")
            out.append(f"{key}={value}")
    return "\n".join(out) + "\n"
