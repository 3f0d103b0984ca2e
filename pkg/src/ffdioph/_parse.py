"""Tiny recursive-descent parser for the textual element syntax.

Grammar (whitespace ignored)::

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor (['*'] factor)*        # juxtaposition multiplies: 2X^2
    factor := atom ['^' ['-'] INT]          # '**' accepted for '^'
    atom   := INT | NAME | '(' expr ')' | 'O' '(' expr ')'

The parser builds a small tuple AST; ``evaluate`` folds it into any ring
whose values support ``+``, ``-``, ``*`` given two callbacks.
"""
import re

from .errors import ParseError

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*^()]))")


def tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at {pos} in {text!r}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("int", int(num)))
        elif name is not None:
            out.append(("name", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            raise ParseError(f"expected {value or kind} in {self.text!r}")
        self.i += 1
        return tok

    def parse(self):
        node = self.expr()
        if self.i != len(self.toks):
            raise ParseError(f"trailing input in {self.text!r}")
        return node

    def expr(self):
        if self.peek() == ("op", "-"):
            self.take()
            node = ("neg", self.term())
        else:
            node = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = ("add" if op == "+" else "sub", node, self.term())
        return node

    def term(self):
        node = self.factor()
        while True:
            tok = self.peek()
            if tok == ("op", "*"):
                self.take()
                node = ("mul", node, self.factor())
            elif tok[0] in ("int", "name") or tok == ("op", "("):
                node = ("mul", node, self.factor())
            else:
                return node

    def factor(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            sign = 1
            if self.peek() == ("op", "-"):
                self.take()
                sign = -1
            elif self.peek() == ("op", "("):
                # X^(-3)
                self.take()
                if self.peek() == ("op", "-"):
                    self.take()
                    sign = -1
                e = self.take("int")[1]
                self.take("op", ")")
                return ("pow", base, sign * e)
            return ("pow", base, sign * self.take("int")[1])
        return base

    def atom(self):
        kind, val = self.peek()
        if kind == "int":
            self.take()
            return ("num", val)
        if kind == "name":
            self.take()
            if val == "O" and self.peek() == ("op", "("):
                self.take()
                inner = self.expr()
                self.take("op", ")")
                return ("bigO", inner)
            return ("sym", val)
        if (kind, val) == ("op", "("):
            self.take()
            node = self.expr()
            self.take("op", ")")
            return node
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse(text):
    return _Parser(text).parse()


def evaluate(node, const, atom):
    """Fold ``node``; ``const(n)`` builds integers, ``atom(name, e)`` builds name^e."""
    tag = node[0]
    if tag == "num":
        return const(node[1])
    if tag == "sym":
        return atom(node[1], 1)
    if tag == "pow":
        base, e = node[1], node[2]
        if base[0] == "sym":
            return atom(base[1], e)
        if e < 0:
            raise ParseError("negative powers only apply to symbols")
        val = evaluate(base, const, atom)
        out = const(1)
        for _ in range(e):
            out = out * val
        return out
    if tag == "neg":
        return const(0) - evaluate(node[1], const, atom)
    if tag == "bigO":
        raise ParseError("O(...) is only allowed as a trailing term")
    a = evaluate(node[1], const, atom)
    b = evaluate(node[2], const, atom)
    if tag == "add":
        return a + b
    if tag == "sub":
        return a - b
    return a * b


def split_big_o(node):
    """Detach a trailing ``+ O(...)`` term; returns (body or None, O-argument or None)."""
    if node[0] == "bigO":
        return None, node[1]
    if node[0] == "add" and node[2][0] == "bigO":
        return node[1], node[2][1]
    return node, None
