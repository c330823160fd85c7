"""Expression language shared by the relation catalog and the command line.

Grammar (whitespace is insignificant)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | '+' factor | power
    power   := primary ('^' primary)?
    primary := number | '(' expr ')'
             | 'S' '[' ints ']' '(' expr ')'          harmonic sum
             | 'H' '[' ints ']' '(' expr ')'          harmonic polylogarithm
             | 'M' '[' expr ']' ['+'] '(' expr ')'    Mellin transform (+ = plus prescription)
             | name '(' expr (',' expr)* ')'          function call
             | name                                   constant or variable

Variables are ``N`` (the sum argument) and ``x`` (inside Mellin kernels).
Kernel functions: ``Li2..Li6``, Nielsen ``S12``, ``S13``, ... (``Spn``),
``A1``, ``A2``, ``A3``, ``H[...]``, ``ln``.  Constants: ``zeta(k)``, ``ln2``,
``s6``, ``pi``, ``Li4(1/2)`` and friends.

Syntax errors carry the 1-based character position of the offending token.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import mpmath
from mpmath import mp, mpf

from .specfun import constants as C


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, position: int | None = None):
        self.position = position
        self.bare = message
        super().__init__(message if position is None else f"{message} at position {position}")


class EvaluationError(ValueError):
    pass


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    text: str

    @property
    def value(self) -> Fraction:
        return Fraction(self.text)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple


@dataclass(frozen=True)
class SumRef:
    indices: tuple
    arg: object


@dataclass(frozen=True)
class HplRef:
    word: tuple
    arg: object


@dataclass(frozen=True)
class MellinRef:
    kernel: object
    plus: bool
    arg: object


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d+)?(?:\.\d*)*)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()\[\],]))"
)

_LI = re.compile(r"^Li([1-8])$")
_NIELSEN = re.compile(r"^S([1-9])([1-9])$")
_AUX = re.compile(r"^A([123])$")
_ZETA_NAME = re.compile(r"^zeta([2-9]|1[0-2])$")
FUNCTIONS = {"ln", "log", "zeta"}
VARIABLES = {"N", "x"}
BARE_CONSTANTS = {"ln2", "s6", "pi", "gamma"}


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int  # 1-based


def tokenize(text: str) -> list[_Tok]:
    out = []
    i = 0
    n = len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        m = _TOKEN.match(text, i)
        if not m or m.end() == i:
            raise ExprSyntaxError(f"unexpected character {text[i]!r}", i + 1)
        kind = m.lastgroup
        start = m.start(kind)
        tok = m.group(kind)
        if kind == "num" and tok.count(".") > 1:
            raise ExprSyntaxError(f"malformed number {tok!r}", start + 1)
        out.append(_Tok(kind, tok, start + 1))
        i = m.end()
    out.append(_Tok("end", "", n + 1))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def advance(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> _Tok:
        t = self.tok
        if t.text != text or t.kind == "end":
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ExprSyntaxError(f"expected {text!r}, found {found}", t.pos)
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return node

    def expr(self):
        node = self.term()
        while self.tok.text in ("+", "-") and self.tok.kind == "op":
            op = self.advance().text
            node = Bin(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.tok.text in ("*", "/") and self.tok.kind == "op":
            op_tok = self.advance()
            right = self.factor()
            if op_tok.text == "/" and isinstance(right, Num) and right.value == 0:
                raise ExprSyntaxError("malformed rational (zero denominator)", op_tok.pos + 1)
            node = Bin(op_tok.text, node, right)
        return node

    def factor(self):
        if self.tok.kind == "op" and self.tok.text == "-":
            self.advance()
            return Neg(self.factor())
        if self.tok.kind == "op" and self.tok.text == "+":
            self.advance()
            return self.factor()
        return self.power()

    def power(self):
        base = self.primary()
        if self.tok.kind == "op" and self.tok.text == "^":
            self.advance()
            if self.tok.kind == "op" and self.tok.text == "-":
                raise ExprSyntaxError("negative exponents must be parenthesised", self.tok.pos)
            return Bin("^", base, self.primary())
        return base

    def _int_list(self) -> tuple[tuple, list[int]]:
        self.expect("[")
        vals, positions = [], []
        while True:
            sign = 1
            if self.tok.kind == "op" and self.tok.text in "+-":
                sign = -1 if self.advance().text == "-" else 1
            t = self.tok
            if t.kind != "num" or "." in t.text:
                raise ExprSyntaxError("expected an integer index", t.pos)
            self.advance()
            vals.append(sign * int(t.text))
            positions.append(t.pos)
            if self.tok.text == ",":
                self.advance()
                continue
            self.expect("]")
            return tuple(vals), positions

    def _call_arg(self):
        self.expect("(")
        node = self.expr()
        self.expect(")")
        return node

    def primary(self):
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Num(t.text)
        if t.kind == "op" and t.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if t.kind != "name":
            found = "end of input" if t.kind == "end" else repr(t.text)
            raise ExprSyntaxError(f"unexpected {found}", t.pos)
        name = t.text
        nxt = self.toks[self.i + 1]
        if name in ("S", "H") and nxt.text == "[":
            self.advance()
            idx, positions = self._int_list()
            if name == "S":
                for a, p in zip(idx, positions):
                    if a == 0:
                        raise ExprSyntaxError("zero index", p)
                if not idx:
                    raise ExprSyntaxError("empty index list", t.pos)
                return SumRef(idx, self._call_arg())
            for a, p in zip(idx, positions):
                if a not in (0, 1, -1):
                    raise ExprSyntaxError("HPL letters must be 0, 1 or -1", p)
            return HplRef(idx, self._call_arg())
        if name == "M" and nxt.text == "[":
            self.advance()
            self.advance()
            kernel = self.expr()
            self.expect("]")
            plus = False
            if self.tok.text == "+" and self.toks[self.i + 1].text == "(":
                self.advance()
                plus = True
            return MellinRef(kernel, plus, self._call_arg())
        self.advance()
        if self.tok.text == "(":
            if not (_LI.match(name) or _NIELSEN.match(name) or _AUX.match(name) or name in FUNCTIONS):
                raise ExprSyntaxError(f"unknown function {name!r}", t.pos)
            self.advance()
            args = [self.expr()]
            while self.tok.text == ",":
                self.advance()
                args.append(self.expr())
            self.expect(")")
            if name == "log":
                name = "ln"
            return Call(name, tuple(args))
        if name in VARIABLES:
            return Var(name)
        m = _ZETA_NAME.match(name)
        if m:
            return Call("zeta", (Num(m.group(1)),))
        if name in BARE_CONSTANTS:
            return Const(name)
        raise ExprSyntaxError(f"unknown name {name!r}", t.pos)


def parse(text: str):
    """Parse ``text`` into an AST; raises :class:`ExprSyntaxError`."""
    return _Parser(text).parse()


# -- printer -----------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}


def _prec(node) -> int:
    if isinstance(node, Bin):
        return _PREC[node.op]
    if isinstance(node, Neg):
        return 3
    return 5


def to_text(node) -> str:
    """Canonical text; ``parse(to_text(a)) == a`` for every AST ``a``."""
    if isinstance(node, Num):
        return node.text
    if isinstance(node, (Var, Const)):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}({', '.join(to_text(a) for a in node.args)})"
    if isinstance(node, SumRef):
        return f"S[{','.join(map(str, node.indices))}]({to_text(node.arg)})"
    if isinstance(node, HplRef):
        return f"H[{','.join(map(str, node.word))}]({to_text(node.arg)})"
    if isinstance(node, MellinRef):
        return f"M[{to_text(node.kernel)}]{'+' if node.plus else ''}({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.operand)
        return f"-({inner})" if _prec(node.operand) < 3 else f"-{inner}"
    if isinstance(node, Bin):
        p = _PREC[node.op]
        left, right = to_text(node.left), to_text(node.right)
        if node.op == "^":
            if _prec(node.left) < 5:
                left = f"({left})"
            if _prec(node.right) < 5:
                right = f"({right})"
            return f"{left}^{right}"
        if _prec(node.left) < p:
            left = f"({left})"
        if _prec(node.right) <= p:
            right = f"({right})"
        if node.op in "+-":
            return f"{left} {node.op} {right}"
        return f"{left}{node.op}{right}"
    raise TypeError(node)


def walk(node):
    yield node
    if isinstance(node, Bin):
        yield from walk(node.left)
        yield from walk(node.right)
    elif isinstance(node, Neg):
        yield from walk(node.operand)
    elif isinstance(node, Call):
        for a in node.args:
            yield from walk(a)
    elif isinstance(node, (SumRef, HplRef)):
        yield from walk(node.arg)
    elif isinstance(node, MellinRef):
        yield from walk(node.kernel)
        yield from walk(node.arg)


def additive_terms(node, sign: int = 1) -> list[tuple[int, object]]:
    """Flatten top-level + and - into signed terms."""
    if isinstance(node, Bin) and node.op in "+-":
        return additive_terms(node.left, sign) + additive_terms(node.right, sign if node.op == "+" else -sign)
    if isinstance(node, Neg):
        return additive_terms(node.operand, -sign)
    return [(sign, node)]


# -- argument and denominator classification --------------------------------


def _is_x(n):
    return isinstance(n, Var) and n.name == "x"


def _is_num(n, v):
    return isinstance(n, Num) and n.value == v


def classify_argument(node) -> str:
    """Recognise the kernel arguments x, -x, 1-x, 1+x, x^2."""
    if _is_x(node):
        return "x"
    if isinstance(node, Neg) and _is_x(node.operand):
        return "-x"
    if isinstance(node, Bin):
        if node.op == "-" and _is_num(node.left, 1) and _is_x(node.right):
            return "1-x"
        if node.op == "+" and ((_is_num(node.left, 1) and _is_x(node.right)) or (_is_x(node.left) and _is_num(node.right, 1))):
            return "1+x"
        if node.op == "^" and _is_x(node.left) and _is_num(node.right, 2):
            return "x^2"
    raise EvaluationError(f"unsupported kernel argument {to_text(node)!r}")


def classify_denominator(node) -> str | None:
    if isinstance(node, Bin):
        if node.op == "-" and _is_x(node.left) and _is_num(node.right, 1):
            return "x-1"
        if node.op == "-" and _is_num(node.left, 1) and _is_x(node.right):
            return "1-x"
        if node.op == "+" and ((_is_num(node.left, 1) and _is_x(node.right)) or (_is_x(node.left) and _is_num(node.right, 1))):
            return "1+x"
        if node.op == "-" and isinstance(node.left, Bin) and node.left.op == "^" and _is_x(node.left.left) \
                and _is_num(node.left.right, 2) and _is_num(node.right, 1):
            return "x^2-1"
        if node.op == "-" and _is_num(node.left, 1) and isinstance(node.right, Bin) and node.right.op == "^" \
                and _is_x(node.right.left) and _is_num(node.right.right, 2):
            return "1-x^2"
    return None


def split_kernel(kernel) -> tuple[object, str | None]:
    """Split ``numerator/denominator`` at the top level of a Mellin kernel."""
    if isinstance(kernel, Bin) and kernel.op == "/":
        den = classify_denominator(kernel.right)
        if den is not None:
            return kernel.left, den
    return kernel, None


def _contains_x(node) -> bool:
    return any(_is_x(n) for n in walk(node))


# -- kernel compilation -------------------------------------------------------


def _constant_call(node: Call):
    """Numeric value of a constant-valued call such as zeta(3) or Li4(1/2)."""
    if node.name == "zeta":
        k = _int_value(node.args[0])
        return C.value(f"zeta({k})", mp.dps)
    from .specfun import functions as F

    if len(node.args) != 1:
        raise EvaluationError(f"{node.name} takes one argument")
    arg = _plain_value(node.args[0])
    m = _LI.match(node.name)
    if m:
        k = int(m.group(1))
        if arg == Fraction(1, 2):
            return C.value(f"Li{k}(1/2)", mp.dps)
        return F.polylog(k, _to_mpf(arg), mp.dps)
    if node.name == "ln":
        return mpmath.log(_to_mpf(arg))
    m = _NIELSEN.match(node.name)
    if m:
        return F.nielsen(int(m.group(1)), int(m.group(2)), _to_mpf(arg), mp.dps)
    m = _AUX.match(node.name)
    if m:
        return F.aux_A(int(m.group(1)), _to_mpf(arg), mp.dps)
    raise EvaluationError(f"cannot evaluate {node.name} at a number")


def substitute(node, name: str, value):
    """Copy of ``node`` with the variable ``name`` replaced by the tree ``value``."""
    if isinstance(node, Var):
        return value if node.name == name else node
    if isinstance(node, Call):
        return Call(node.name, tuple(substitute(a, name, value) for a in node.args))
    if isinstance(node, SumRef):
        return SumRef(node.indices, substitute(node.arg, name, value))
    if isinstance(node, HplRef):
        return HplRef(node.word, substitute(node.arg, name, value))
    if isinstance(node, MellinRef):
        if name == "x":
            return MellinRef(node.kernel, node.plus, substitute(node.arg, name, value))
        return MellinRef(substitute(node.kernel, name, value), node.plus, substitute(node.arg, name, value))
    if isinstance(node, Neg):
        return Neg(substitute(node.operand, name, value))
    if isinstance(node, Bin):
        return Bin(node.op, substitute(node.left, name, value), substitute(node.right, name, value))
    return node


def _int_value(node) -> int:
    v = _plain_value(node)
    if not isinstance(v, Fraction) or v.denominator != 1:
        raise EvaluationError(f"expected an integer, got {to_text(node)}")
    return int(v)


def _plain_value(node):
    """Value of a parameter-free numeric subexpression (rational when possible)."""
    return evaluate(node, Context(N=None, digits=mp.dps))


def _compile(node):
    from .specfun import functions as F

    if not _contains_x(node):
        v = _plain_value(node)
        return F.HplCombination.const(_to_mpf(v))
    if isinstance(node, Bin):
        if node.op == "+":
            return _compile(node.left) + _compile(node.right)
        if node.op == "-":
            return _compile(node.left) - _compile(node.right)
        if node.op == "*":
            return _compile(node.left) * _compile(node.right)
        if node.op == "/":
            if _contains_x(node.right):
                raise EvaluationError(f"cannot divide a kernel by {to_text(node.right)}")
            return _compile(node.left) * (1 / _to_mpf(_plain_value(node.right)))
        if node.op == "^":
            return _compile(node.left) ** _int_value(node.right)
    if isinstance(node, Neg):
        return -_compile(node.operand)
    if isinstance(node, HplRef):
        return F.H(node.word, classify_argument(node.arg))
    if isinstance(node, Call):
        if len(node.args) != 1:
            raise EvaluationError(f"{node.name} takes one argument")
        arg = classify_argument(node.args[0])
        m = _LI.match(node.name)
        if m:
            return F.li(int(m.group(1)), arg)
        m = _NIELSEN.match(node.name)
        if m:
            return F.nielsen_comb(int(m.group(1)), int(m.group(2)), arg)
        m = _AUX.match(node.name)
        if m:
            return F.aux_comb(int(m.group(1)), arg)
        if node.name == "ln":
            return F.log_of(arg)
    raise EvaluationError(f"cannot compile {to_text(node)!r} into a kernel")


@lru_cache(maxsize=4096)
def _compile_cached(text: str, dps: int):
    with mp.workdps(dps + 20):
        return _compile(parse(text))


def compile_kernel(kernel, digits: int | None = None):
    """Kernel expression in x -> HplCombination (coefficients carry ``digits`` + 20 digits)."""
    text = kernel if isinstance(kernel, str) else to_text(kernel)
    return _compile_cached(to_text(parse(text)), int(digits or mp.dps))


# -- weights -----------------------------------------------------------------


class WeightError(ValueError):
    pass


def weight_of(node) -> int:
    """Transcendental weight of an expression; raises WeightError if inhomogeneous.

    Sums count their weight, constants their transcendentality, kernel
    functions their depth in iterated integrals, and a Mellin atom its
    numerator weight plus one for a 1/(x +- 1) denominator.
    """
    if isinstance(node, Num):
        return 0
    if isinstance(node, Var):
        return 0
    if isinstance(node, Const):
        return C.constant_weight(node.name)
    if isinstance(node, SumRef):
        return sum(abs(a) for a in node.indices)
    if isinstance(node, HplRef):
        return len(node.word)
    if isinstance(node, Call):
        if node.name == "zeta":
            return _int_value(node.args[0])
        m = _LI.match(node.name)
        if m:
            return int(m.group(1))
        m = _NIELSEN.match(node.name)
        if m:
            return int(m.group(1)) + int(m.group(2))
        if _AUX.match(node.name):
            return 5
        if node.name == "ln":
            return 1
    if isinstance(node, MellinRef):
        # the transform integrates once more, with or without a denominator
        num, _ = split_kernel(node.kernel)
        return weight_of(num) + 1
    deg = _n_degree(node)
    if deg is not None:
        # rational functions of N: 1/(N+c) counts like a weight-one object
        return -deg
    if isinstance(node, Neg):
        return weight_of(node.operand)
    if isinstance(node, Bin):
        if node.op == "^":
            if isinstance(node.left, Neg) and _is_num(node.left.operand, 1):
                return 0
            return weight_of(node.left) * _int_value(node.right)
        lw, rw = weight_of(node.left), weight_of(node.right)
        if node.op == "*":
            return lw + rw
        if node.op == "/":
            return lw - rw
        if lw != rw and not (_is_zero_weight_rational(node.left) and _is_zero_weight_rational(node.right)):
            raise WeightError(f"weights {lw} and {rw} added in {to_text(node)}")
        return lw
    raise WeightError(f"no weight for {to_text(node)}")


def _n_degree(node) -> int | None:
    """Degree of a polynomial in N built from numbers; None for anything else."""
    if isinstance(node, Num):
        return None
    if isinstance(node, Var):
        return 1 if node.name == "N" else None
    if isinstance(node, Neg):
        return _n_degree(node.operand)
    if isinstance(node, Bin) and node.op in "+-*^":
        if node.op == "^":
            d = _n_degree(node.left)
            return None if d is None else d * _int_value(node.right)
        ld, rd = _n_degree(node.left), _n_degree(node.right)
        if ld is None and rd is None:
            return None
        if ld is None and not isinstance(node.left, Num) or rd is None and not isinstance(node.right, Num):
            return None
        ld, rd = ld or 0, rd or 0
        return ld + rd if node.op == "*" else max(ld, rd)
    return None


def _is_zero_weight_rational(node) -> bool:
    return isinstance(node, Num)


def term_weights(node) -> list[tuple[str, int | None]]:
    """Weight of each additive term (None where a term is itself inhomogeneous)."""
    out = []
    for _, t in additive_terms(node):
        try:
            out.append((to_text(t), weight_of(t)))
        except WeightError:
            out.append((to_text(t), None))
    return out


# -- evaluation ---------------------------------------------------------------


@dataclass
class Context:
    """Evaluation settings.

    ``N`` is the sum argument (int, Fraction, mpf or mpc, or None).  ``eta``
    is the parity used for (-1)^N at non-integer N.  ``sum_value`` is an
    optional hook ``(indices, arg) -> value`` for sums at non-integer
    arguments; with ``hook_integers`` it is used at integer arguments too.
    """

    N: object = None
    digits: int = 50
    eta: int | None = None
    sum_value: Callable | None = None
    hook_integers: bool = False
    mellin_errors: list | None = None


def _to_mpf(v):
    if isinstance(v, Fraction):
        return mpf(v.numerator) / v.denominator
    return v


def _as_exact_int(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return int(v)
    if isinstance(v, int):
        return v
    return None


def _mul(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return _to_mpf(a) * _to_mpf(b)


def _add(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _to_mpf(a) + _to_mpf(b)


def _div(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        if b == 0:
            raise EvaluationError("division by zero")
        return a / b
    return _to_mpf(a) / _to_mpf(b)


_ATOM_CACHE: dict[tuple, object] = {}


def mellin_atom_of(node: MellinRef):
    from .mellin import MellinAtom

    num, den = split_kernel(node.kernel)
    key = (to_text(num), den, node.plus)
    a = _ATOM_CACHE.get(key)
    if a is None:
        a = MellinAtom(to_text(num), den, node.plus)
        _ATOM_CACHE[key] = a
    return a


def evaluate(node, ctx: Context | None = None):
    """Evaluate an expression; exact (Fraction) where possible, otherwise mpf/mpc."""
    ctx = ctx or Context()
    with mp.workdps(ctx.digits + 10):
        return _ev(node, ctx)


def _ev(node, ctx: Context):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        if node.name == "N":
            if ctx.N is None:
                raise EvaluationError("no value given for N")
            n = ctx.N
            if isinstance(n, int):
                return Fraction(n)
            return n
        raise EvaluationError("x may only appear inside M[...] or function kernels")
    if isinstance(node, Const):
        return C.value(node.name, ctx.digits)
    if isinstance(node, Call):
        if node.name == "zeta":
            return C.value(f"zeta({_int_value(node.args[0])})", ctx.digits)
        if _contains_x(node):
            raise EvaluationError(f"{to_text(node)} depends on x outside a Mellin kernel")
        return _constant_call(node)
    if isinstance(node, SumRef):
        arg = _ev(node.arg, ctx)
        if ctx.hook_integers and ctx.sum_value is not None:
            return ctx.sum_value(node.indices, arg)
        n = _as_exact_int(arg)
        if n is None and not isinstance(arg, Fraction):
            try:
                if mpmath.im(arg) == 0 and mpmath.re(arg) == int(mpmath.re(arg)):
                    n = int(mpmath.re(arg))
            except (TypeError, ValueError):
                n = None
        if n is not None:
            if n < 0:
                raise EvaluationError(f"sum argument {n} is negative")
            if n == 0:
                return Fraction(0)
            from .sums import eval_exact

            return eval_exact(node.indices, n)
        if ctx.sum_value is None:
            raise EvaluationError(f"S at non-integer argument needs analytic continuation: {to_text(node)}")
        return ctx.sum_value(node.indices, arg)
    if isinstance(node, HplRef):
        from .specfun.hpl import hpl

        arg = _ev(node.arg, ctx)
        return hpl(node.word, _to_mpf(arg), ctx.digits)
    if isinstance(node, MellinRef):
        from .mellin import mellin

        a = mellin_atom_of(node)
        arg = _to_mpf(_ev(node.arg, ctx))
        res = mellin(a, arg, ctx.digits, eta=ctx.eta)
        if ctx.mellin_errors is not None:
            ctx.mellin_errors.append(res.error)
        return res.value
    if isinstance(node, Neg):
        v = _ev(node.operand, ctx)
        return -v
    if isinstance(node, Bin):
        if node.op == "^":
            return _power(node, ctx)
        a, b = _ev(node.left, ctx), _ev(node.right, ctx)
        if node.op == "+":
            return _add(a, b)
        if node.op == "-":
            return _add(a, -b)
        if node.op == "*":
            return _mul(a, b)
        if node.op == "/":
            return _div(a, b)
    raise EvaluationError(f"cannot evaluate {node!r}")


def _power(node: Bin, ctx: Context):
    base = _ev(node.left, ctx)
    e = _ev(node.right, ctx)
    k = _as_exact_int(e)
    if k is None and not isinstance(e, Fraction):
        try:
            if mpmath.im(e) == 0 and mpmath.re(e) == int(mpmath.re(e)):
                k = int(mpmath.re(e))
        except (TypeError, ValueError):
            pass
    if k is not None:
        if isinstance(base, Fraction):
            if base == 0 and k < 0:
                raise EvaluationError("division by zero")
            return base**k
        return _to_mpf(base) ** k
    if base == -1:
        # parity factor at non-integer N: (-1)^(N + c) = eta (-1)^c
        if ctx.eta is None or ctx.N is None:
            raise EvaluationError("(-1)^N at non-integer N needs a parity branch")
        c = e - ctx.N
        ci = None
        try:
            if mpmath.im(c) == 0 and abs(mpmath.re(c) - mpmath.nint(mpmath.re(c))) < mpf(10) ** (-ctx.digits):
                ci = int(mpmath.nint(mpmath.re(c)))
        except (TypeError, ValueError):
            pass
        if ci is None:
            raise EvaluationError("parity exponent must be N plus an integer")
        return Fraction(ctx.eta * (-1) ** ci)
    return _to_mpf(base) ** e


def evaluate_text(text: str, N=None, digits: int = 50, eta=None):
    return evaluate(parse(text), Context(N=N, digits=digits, eta=eta))
