"""Hierarchical parameter container.

A :class:`ParamTree` is built by the solver classes (leaves are declared with
the underscore API ``_set_child`` / ``_set_leaf``), then frozen. Once frozen,
no parameter can be added; existing leaves can still be modified, with type
checking. A simulation keeps a locked deep copy that cannot be modified at all.

The text format (``params.txt``) is a nested block document::

    # comment
    params {
      solver = "ns2d"
      nu_2 = 0.001
      oper {
        nx = 64
        Lx = 6.283185307179586
      }
      output {
        increments {
          orders = [2.0, 3.0]
        }
      }
    }

Floats are written with :func:`repr` (shortest round-trip decimal) so that a
serialize/deserialize cycle is bit-exact.
"""

from __future__ import annotations

import json
import numbers
import re

import numpy as np

from .errors import (
    ParamsParseError,
    ParamTypeError,
    ReadOnlyParamsError,
    UnknownParameterError,
)

__all__ = ["ParamTree", "set_value", "serialize", "deserialize"]

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


def _kind_of(value):
    if isinstance(value, (bool, np.bool_)):
        return "bool"
    if isinstance(value, numbers.Integral):
        return "int"
    if isinstance(value, numbers.Real):
        return "float"
    if isinstance(value, str):
        return "str"
    if isinstance(value, (list, tuple, np.ndarray)):
        return "list"
    raise ParamTypeError(f"unsupported parameter value {value!r}")


def _normalize_list(value):
    items = list(value)
    if all(isinstance(v, str) for v in items):
        return tuple(items)
    out = []
    for v in items:
        if isinstance(v, (bool, np.bool_)) or not isinstance(v, numbers.Real):
            raise ParamTypeError(
                f"list parameters hold only numbers or only strings, got {v!r}"
            )
        out.append(float(v))
    return tuple(out)


def _coerce(kind, value, path):
    """Return ``value`` converted to the leaf kind, or raise ParamTypeError."""
    vkind = _kind_of(value)
    if kind == vkind:
        if kind == "bool":
            return bool(value)
        if kind == "int":
            return int(value)
        if kind == "float":
            return float(value)
        if kind == "list":
            return _normalize_list(value)
        return value
    if kind == "float" and vkind == "int":
        return float(value)
    raise ParamTypeError(
        f"parameter {path!r} expects {kind}, got {type(value).__name__} {value!r}"
    )


def _same_value(a, b):
    if isinstance(a, float) and isinstance(b, float):
        return repr(a) == repr(b)
    if isinstance(a, tuple) and isinstance(b, tuple):
        return len(a) == len(b) and all(_same_value(x, y) for x, y in zip(a, b))
    return type(a) is type(b) and a == b


def _common_prefix_len(a, b):
    a, b = a.lower(), b.lower()
    n = 0
    for x, y in zip(a, b):
        if x != y:
            break
        n += 1
    return n


class ParamTree:
    """Tree of parameters with attribute access (``params.forcing.enable``)."""

    def __init__(self, name="params"):
        if not _NAME_RE.fullmatch(name):
            raise ValueError(f"invalid parameter tree name {name!r}")
        object.__setattr__(self, "_name", name)
        object.__setattr__(self, "_children", {})
        object.__setattr__(self, "_leaves", {})
        object.__setattr__(self, "_kinds", {})
        object.__setattr__(self, "_frozen", False)
        object.__setattr__(self, "_locked", False)

    # construction API -----------------------------------------------------
    def _set_child(self, name, leaves=None):
        """Return the child tree ``name``, creating it if needed."""
        if name in self._children:
            child = self._children[name]
        else:
            self._check_new_name(name)
            child = ParamTree(name)
            self._children[name] = child
        if leaves:
            for key, value in leaves.items():
                child._set_leaf(key, value)
        return child

    def _set_leaf(self, name, value):
        """Declare a leaf (or reset its default if already declared)."""
        if name in self._leaves:
            self._set_existing(name, value, name)
            return
        self._check_new_name(name)
        kind = _kind_of(value)
        self._kinds[name] = kind
        self._leaves[name] = _coerce(kind, value, name)

    def _check_new_name(self, name):
        if self._locked:
            raise ReadOnlyParamsError("parameters held by a simulation are read-only")
        if self._frozen:
            raise UnknownParameterError(
                f"cannot add parameter {name!r} to frozen tree {self._name!r}"
            )
        if not _NAME_RE.fullmatch(name):
            raise ValueError(f"invalid parameter name {name!r}")
        if name in self._children or name in self._leaves:
            raise ValueError(f"duplicate parameter name {name!r}")

    def _freeze(self):
        object.__setattr__(self, "_frozen", True)
        for child in self._children.values():
            child._freeze()
        return self

    def _lock(self):
        self._freeze()
        object.__setattr__(self, "_locked", True)
        for child in self._children.values():
            child._lock()
        return self

    @property
    def frozen(self):
        return self._frozen

    @property
    def locked(self):
        return self._locked

    @property
    def name(self):
        return self._name

    # access ---------------------------------------------------------------
    def __getattr__(self, name):
        if name.startswith("__"):
            raise AttributeError(name)
        children = object.__getattribute__(self, "_children")
        leaves = object.__getattribute__(self, "_leaves")
        if name in children:
            return children[name]
        if name in leaves:
            return leaves[name]
        raise self._unknown(name)

    def __setattr__(self, name, value):
        if name.startswith("_"):
            raise AttributeError(f"cannot set private attribute {name!r}")
        self._set_existing(name, value, name)

    def __getitem__(self, path):
        return self.get(path)

    def __setitem__(self, path, value):
        self.set(path, value)

    def __contains__(self, path):
        try:
            self._resolve(path)
        except UnknownParameterError:
            return False
        return True

    def _set_existing(self, name, value, path):
        if self._locked:
            raise ReadOnlyParamsError("parameters held by a simulation are read-only")
        if name in self._children:
            raise ParamTypeError(f"{path!r} is a parameter group, not a value")
        if name not in self._leaves:
            raise self._unknown(name, path)
        new = _coerce(self._kinds[name], value, path)
        old = self._leaves[name]
        if isinstance(new, tuple) and old and new and type(old[0]) is not type(new[0]):
            raise ParamTypeError(
                f"parameter {path!r} holds a list of {type(old[0]).__name__}"
            )
        self._leaves[name] = new

    def _unknown(self, name, path=None):
        siblings = list(self._children) + list(self._leaves)
        best = max((_common_prefix_len(name, s) for s in siblings), default=0)
        if best:
            near = [s for s in siblings if _common_prefix_len(name, s) == best]
        else:
            near = siblings
        return UnknownParameterError(
            f"unknown parameter {path or name!r} in {self._name!r}; "
            f"nearest valid names: {', '.join(near) or '(none)'}"
        )

    def _resolve(self, path):
        """Return (parent tree, last name) for a dot path."""
        parts = path.split(".")
        node = self
        for i, part in enumerate(parts[:-1]):
            if part not in node._children:
                raise node._unknown(part, ".".join(parts[: i + 1]))
            node = node._children[part]
        last = parts[-1]
        if last not in node._children and last not in node._leaves:
            raise node._unknown(last, path)
        return node, last

    def get(self, path):
        node, last = self._resolve(path)
        if last in node._children:
            return node._children[last]
        return node._leaves[last]

    def set(self, path, value):
        node, last = self._resolve(path)
        node._set_existing(last, value, path)

    def kind(self, path):
        """Type tag of a leaf: bool, int, float, str or list."""
        node, last = self._resolve(path)
        if last not in node._kinds:
            raise ParamTypeError(f"{path!r} is a parameter group")
        return node._kinds[last]

    def children(self):
        return dict(self._children)

    def leaves(self):
        return dict(self._leaves)

    def iter_leaves(self, prefix=""):
        """Yield ``(dot_path, value)`` depth-first, leaves before children."""
        for key, value in self._leaves.items():
            yield prefix + key, value
        for key, child in self._children.items():
            yield from child.iter_leaves(prefix + key + ".")

    def copy(self):
        """Deep copy, unlocked, with the same frozen state."""
        new = ParamTree(self._name)
        new._kinds.update(self._kinds)
        new._leaves.update(self._leaves)
        for key, child in self._children.items():
            new._children[key] = child.copy()
        object.__setattr__(new, "_frozen", self._frozen)
        return new

    def __eq__(self, other):
        if not isinstance(other, ParamTree):
            return NotImplemented
        if self._name != other._name:
            return False
        if list(self._leaves) != list(other._leaves):
            return False
        if list(self._children) != list(other._children):
            return False
        for key, value in self._leaves.items():
            if self._kinds[key] != other._kinds[key]:
                return False
            if not _same_value(value, other._leaves[key]):
                return False
        return all(c == other._children[k] for k, c in self._children.items())

    __hash__ = None

    def __dir__(self):
        return list(self._children) + list(self._leaves) + list(super().__dir__())

    def __repr__(self):
        return serialize(self)


def set_value(tree, path, value):
    """Update the leaf at ``path``; the tree structure is never extended."""
    tree.set(path, value)


# text format ----------------------------------------------------------------

def _format_value(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    return "[" + ", ".join(_format_value(v) for v in value) + "]"


def _serialize_into(tree, lines, indent):
    pad = "  " * indent
    lines.append(f"{pad}{tree._name} {{")
    for key, value in tree._leaves.items():
        lines.append(f"{pad}  {key} = {_format_value(value)}")
    for child in tree._children.values():
        _serialize_into(child, lines, indent + 1)
    lines.append(f"{pad}}}")


def serialize(tree):
    lines = []
    _serialize_into(tree, lines, 0)
    return "\n".join(lines) + "\n"


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<number>(?:[-+](?:inf|nan)|[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)(?![A-Za-z0-9_]))
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:[^"\\\n]|\\.)*")
  | (?P<punct>[{}=\[\],])
    """,
    re.VERBOSE,
)
_INT_RE = re.compile(r"[-+]?\d+")


def _tokenize(text):
    pos = 0
    line, line_start = 1, 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParamsParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind not in ("ws", "comment"):
            tokens.append((kind, tok, line, col))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + tok.rfind("\n") + 1
        pos = m.end()
    tokens.append(("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind, value=None):
        tok = self.take()
        if tok[0] != kind or (value is not None and tok[1] != value):
            want = value or kind
            raise ParamsParseError(f"expected {want!r}, got {tok[1]!r}", tok[2], tok[3])
        return tok

    def parse_document(self):
        tok = self.expect("name")
        tree = ParamTree(tok[1])
        self.expect("punct", "{")
        self.parse_block(tree)
        end = self.peek()
        if end[0] != "eof":
            raise ParamsParseError("text after the root block", end[2], end[3])
        return tree

    def parse_block(self, tree):
        while True:
            tok = self.take()
            if tok[0] == "punct" and tok[1] == "}":
                return
            if tok[0] != "name":
                raise ParamsParseError(f"expected a name, got {tok[1]!r}", tok[2], tok[3])
            name = tok[1]
            if name in tree._children or name in tree._leaves:
                raise ParamsParseError(f"duplicate name {name!r}", tok[2], tok[3])
            nxt = self.take()
            if nxt[0] == "punct" and nxt[1] == "{":
                child = tree._set_child(name)
                self.parse_block(child)
            elif nxt[0] == "punct" and nxt[1] == "=":
                tree._set_leaf(name, self.parse_value())
            else:
                raise ParamsParseError(
                    f"expected '=' or '{{' after {name!r}", nxt[2], nxt[3]
                )

    def parse_value(self):
        tok = self.take()
        kind, text, line, col = tok
        if kind == "number":
            if _INT_RE.fullmatch(text):
                return int(text)
            return float(text)
        if kind == "name" and text in ("true", "false"):
            return text == "true"
        if kind == "name" and text in ("inf", "nan"):
            return float(text)
        if kind == "string":
            return json.loads(text)
        if kind == "punct" and text == "[":
            items = []
            if self.peek()[1] == "]":
                self.take()
                return items
            while True:
                items.append(self.parse_value())
                sep = self.take()
                if sep[1] == "]":
                    break
                if sep[1] != ",":
                    raise ParamsParseError("expected ',' or ']'", sep[2], sep[3])
            kinds = {_kind_of(v) for v in items}
            if not (kinds <= {"int", "float"} or kinds == {"str"}):
                raise ParamsParseError("mixed list element types", line, col)
            return items
        raise ParamsParseError(f"expected a value, got {text!r}", line, col)


def deserialize(text):
    """Parse ``params.txt`` text into a frozen :class:`ParamTree`."""
    return _Parser(text).parse_document()._freeze()


def load(path):
    with open(path, encoding="utf-8") as f:
        return deserialize(f.read())


def save(tree, path):
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize(tree))


def parse_value_text(text, kind):
    """Parse a command-line override value for a leaf of the given kind.

    Strings may be given unquoted. Numbers and booleans use the file grammar.
    """
    if kind == "str" and not text.startswith('"'):
        return text
    parser = _Parser(text)
    value = parser.parse_value()
    end = parser.peek()
    if end[0] != "eof":
        raise ParamsParseError(f"trailing text in value {text!r}", end[2], end[3])
    return value
