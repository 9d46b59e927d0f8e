"""Matched-pair pushdown codec.

The compressor reads symbols over the alphabet ``{0, ..., k-1}``.  A symbol
that differs from the stack top is pushed and echoed to the output; a
symbol equal to the top pops it.  Each maximal run of ``m`` consecutive
pops is coded as ``m // 2`` copies of the pair marker, plus one odd marker
when ``m`` is odd; the odd marker is emitted together with the next pushed
symbol, or by ``flush`` at end of input.  The output alphabet is therefore
the input alphabet extended by the two marker codes.

The decompressor inverts this exactly: plain symbols are pushed and
echoed, the odd marker pops one symbol, the pair marker pops two (topmost
first).  With flushing enabled the round trip is the identity on every
finite word.

Both directions exist twice: as explicit transducer tables executed by
:mod:`pdtcomp.engine` (the reference semantics, with traces), and as the
streaming sessions :class:`Compressor` / :class:`Decompressor` used on hot
paths.  The test suite pins the two routes to each other.
"""

from functools import lru_cache
from typing import NamedTuple

from . import engine
from .engine import Configuration, POP, RunTrace, Transition, TransducerSpec

K_MIN = 2
K_MAX = 65534  # pair marker k + 1 must fit a 16-bit stream code


class CodecError(ValueError):
    """Base class for codec usage and data errors."""


class AlphabetError(CodecError):
    """An input symbol lies outside the expected alphabet."""


class MalformedStreamError(CodecError):
    """A coded stream asks for more matched symbols than are pending."""


def check_alphabet_size(k: int) -> int:
    if not isinstance(k, int) or not K_MIN <= k <= K_MAX:
        raise ValueError(f"alphabet size must be an integer in [{K_MIN}, {K_MAX}], got {k!r}")
    return k


def odd_marker(k: int) -> int:
    """Output code signalling one unpaired pop."""
    return k


def pair_marker(k: int) -> int:
    """Output code signalling two consecutive pops."""
    return k + 1


def stack_bottom(k: int) -> int:
    """Stack-only sentinel; never read, written, or popped."""
    return k + 2


@lru_cache(maxsize=None)
def build_compressor(k: int) -> TransducerSpec:
    """Transducer table for the compressor over ``{0, ..., k-1}``.

    States: 0 (between pop pairs) and 1 (one pop pending).  Four families:
    push-and-echo, first pop of a pair (silent), second pop (pair marker),
    and push-after-odd-run (odd marker plus the pushed symbol).
    """
    check_alphabet_size(k)
    bottom = stack_bottom(k)
    alphabet = range(k)
    stack_syms = list(alphabet) + [bottom]
    ts: list[Transition] = []
    for z in stack_syms:
        for a in alphabet:
            if z != a:
                ts.append(Transition(0, z, a, (a,), 0, (z, a)))
                ts.append(Transition(1, z, a, (odd_marker(k), a), 0, (z, a)))
    for a in alphabet:
        ts.append(Transition(0, a, a, (), 1, ()))
        ts.append(Transition(1, a, a, (pair_marker(k),), 0, ()))
    return TransducerSpec(
        input_alphabet=frozenset(alphabet),
        output_alphabet=frozenset(range(k + 2)),
        stack_alphabet=frozenset(stack_syms),
        states=frozenset({0, 1}),
        initial_state=0,
        start_symbol=bottom,
        transitions=tuple(ts),
    )


@lru_cache(maxsize=None)
def build_decompressor(k: int) -> TransducerSpec:
    """Transducer table for the inverse direction.

    Plain symbols push and echo (also onto the bottom sentinel); the odd
    marker pops and echoes the top; the pair marker pops and echoes the
    top, then an input-free move pops and echoes the next one.
    """
    check_alphabet_size(k)
    bottom = stack_bottom(k)
    alphabet = range(k)
    stack_syms = list(alphabet) + [bottom]
    ts: list[Transition] = []
    for z in stack_syms:
        for a in alphabet:
            ts.append(Transition(0, z, a, (a,), 0, (z, a)))
    for z in alphabet:
        ts.append(Transition(0, z, odd_marker(k), (z,), 0, ()))
        ts.append(Transition(0, z, pair_marker(k), (z,), 1, ()))
        ts.append(Transition(1, z, engine.EPSILON, (z,), 0, ()))
    return TransducerSpec(
        input_alphabet=frozenset(range(k + 2)),
        output_alphabet=frozenset(alphabet),
        stack_alphabet=frozenset(stack_syms),
        states=frozenset({0, 1}),
        initial_state=0,
        start_symbol=bottom,
        transitions=tuple(ts),
    )


def _prepared(word, limit: int, what: str):
    """Materialize ``word`` and range-check it in bulk."""
    if not isinstance(word, (bytes, bytearray)):
        word = word if isinstance(word, list) else list(word)
        if word and (min(word) < 0 or max(word) >= limit):
            bad = next(a for a in word if not 0 <= a < limit)
            raise AlphabetError(f"{what} symbol {bad} outside [0, {limit})")
    elif word and max(word) >= limit:
        bad = next(a for a in word if a >= limit)
        raise AlphabetError(f"{what} symbol {bad} outside [0, {limit})")
    return word


class Compressor:
    """Single-owner streaming compressor session.

    ``feed`` accepts any iterable of symbols below ``k`` and returns the
    output emitted so far for them; ``consume`` does the same work without
    materializing output (for measurement runs).  ``flush`` ends the
    session, emitting one odd marker if a pop is pending.

    Counters besides ``symbols_read`` / ``symbols_written``:

    * ``savings``: pair markers emitted so far; equals the difference
      between symbols read and symbols written once the session is flushed.
    * ``clustered_pops``: pops that belong to a maximal run of at least
      two consecutive pops (the current still-open run included).
    """

    def __init__(self, k: int):
        self.k = check_alphabet_size(k)
        self._odd = odd_marker(k)
        self._pair = pair_marker(k)
        self._stack: list[int] = [stack_bottom(k)]
        self._pending = False
        self._finished = False
        self._read = 0
        self._written = 0
        self._pairs = 0
        self._clustered = 0
        self._open_run = 0

    def feed(self, word) -> list[int]:
        word = self._start_feed(word)
        out: list[int] = []
        emit = out.append
        stack = self._stack
        push = stack.append
        pop = stack.pop
        pending = self._pending
        pairs = self._pairs
        clustered = self._clustered
        run = self._open_run
        odd = self._odd
        pair = self._pair
        for a in word:
            if stack[-1] == a:
                pop()
                run += 1
                if pending:
                    emit(pair)
                    pairs += 1
                    pending = False
                else:
                    pending = True
            else:
                push(a)
                if run >= 2:
                    clustered += run
                run = 0
                if pending:
                    emit(odd)
                    pending = False
                emit(a)
        self._pending = pending
        self._pairs = pairs
        self._clustered = clustered
        self._open_run = run
        self._read += len(word)
        self._written += len(out)
        return out

    def consume(self, word) -> None:
        """Like ``feed`` but only the counters are updated."""
        word = self._start_feed(word)
        stack = self._stack
        push = stack.append
        pop = stack.pop
        pending = self._pending
        written = 0
        pairs = 0
        clustered = self._clustered
        run = self._open_run
        for a in word:
            if stack[-1] == a:
                pop()
                run += 1
                if pending:
                    pairs += 1
                    pending = False
                else:
                    pending = True
            else:
                push(a)
                if run >= 2:
                    clustered += run
                run = 0
                written += 2 if pending else 1
                pending = False
        self._pending = pending
        self._pairs += pairs
        self._clustered = clustered
        self._open_run = run
        self._read += len(word)
        self._written += written + pairs

    def flush(self) -> list[int]:
        """End the session; emit the pending odd marker if there is one."""
        if self._finished:
            raise CodecError("compressor session already flushed")
        self._finished = True
        if self._open_run >= 2:
            self._clustered += self._open_run
        self._open_run = 0
        if self._pending:
            self._pending = False
            self._written += 1
            return [self._odd]
        return []

    def _start_feed(self, word):
        if self._finished:
            raise CodecError("compressor session already flushed")
        return _prepared(word, self.k, "input")

    @property
    def state(self) -> int:
        return 1 if self._pending else 0

    @property
    def stack(self) -> tuple[int, ...]:
        return tuple(self._stack)

    @property
    def configuration(self) -> Configuration:
        return Configuration(self.state, tuple(self._stack))

    @property
    def symbols_read(self) -> int:
        return self._read

    @property
    def symbols_written(self) -> int:
        return self._written

    @property
    def savings(self) -> int:
        return self._pairs

    @property
    def clustered_pops(self) -> int:
        return self._clustered + (self._open_run if self._open_run >= 2 else 0)


class Decompressor:
    """Single-owner streaming decompressor session."""

    def __init__(self, k: int):
        self.k = check_alphabet_size(k)
        self._stack: list[int] = [stack_bottom(k)]
        self._read = 0
        self._written = 0

    def feed(self, word) -> list[int]:
        word = _prepared(word, self.k + 2, "coded")
        out: list[int] = []
        emit = out.append
        stack = self._stack
        push = stack.append
        pop = stack.pop
        k = self.k
        position = self._read
        for b in word:
            position += 1
            if b < k:
                push(b)
                emit(b)
            elif b == k:
                if len(stack) < 2:
                    raise MalformedStreamError(
                        f"odd marker at position {position} with no matched symbol pending"
                    )
                emit(pop())
            else:
                if len(stack) < 3:
                    raise MalformedStreamError(
                        f"pair marker at position {position} with fewer than two matched symbols pending"
                    )
                emit(pop())
                emit(pop())
        self._read = position
        self._written += len(out)
        return out

    @property
    def stack(self) -> tuple[int, ...]:
        return tuple(self._stack)

    @property
    def symbols_read(self) -> int:
        return self._read

    @property
    def symbols_written(self) -> int:
        return self._written


def compress(word, k: int, *, flush: bool = True) -> list[int]:
    """Compress a finite word over ``{0, ..., k-1}``.

    With ``flush`` (the default) the coding is injective on finite words;
    without it, a trailing odd pop run keeps its odd marker pending, which
    is the exact prefix behaviour of an unbounded stream.
    """
    session = Compressor(k)
    out = session.feed(word)
    if flush:
        out += session.flush()
    return out


def decompress(word, k: int) -> list[int]:
    """Invert :func:`compress`.  Total on well-formed coded streams.

    Raises ``MalformedStreamError`` when a marker requests a pop that has
    no pending pushed symbol, and ``AlphabetError`` on codes >= k + 2.
    """
    return Decompressor(k).feed(word)


def compress_run(word, k: int, *, flush: bool = True) -> tuple[list[int], Configuration, RunTrace]:
    """Compress through the transducer table, keeping the run trace.

    Slower than :func:`compress` but exposes the per-position push/pop
    record consumed by :mod:`pdtcomp.analysis`.  A flushed odd marker is
    appended to the final trace entry, since it is the retirement of that
    position's pending pop.
    """
    word = _prepared(word, check_alphabet_size(k), "input")
    out, config, trace = engine.run(build_compressor(k), word)
    out = list(out)
    if flush and config.state == 1:
        out.append(odd_marker(k))
        trace.outputs[-1] = trace.outputs[-1] + (odd_marker(k),)
        trace.symbols_written += 1
        config = Configuration(0, config.stack)
    return out, config, trace


class PopRun(NamedTuple):
    start: int
    length: int
    coding: tuple[int, ...]


def pop_run_decomposition(trace: RunTrace) -> list[PopRun]:
    """Maximal pop runs of a compressor trace, with their emitted coding.

    ``start`` is the 1-based input position of the first pop of the run.
    A run of length ``m`` codes to ``m // 2`` pair markers plus, when ``m``
    is odd, the odd marker, found either in the following push entry
    (which emits two symbols) or appended to the last pop by the flush.
    An unflushed trailing odd run has its odd marker still pending and its
    coding is reported without it.
    """
    runs: list[PopRun] = []
    kinds = trace.kinds
    outputs = trace.outputs
    n = len(kinds)
    i = 0
    while i < n:
        if kinds[i] != POP:
            i += 1
            continue
        j = i
        coding: list[int] = []
        while j < n and kinds[j] == POP:
            coding.extend(outputs[j])
            j += 1
        if j < n and len(outputs[j]) == 2:
            coding.append(outputs[j][0])
        runs.append(PopRun(i + 1, j - i, tuple(coding)))
        i = j
    return runs
