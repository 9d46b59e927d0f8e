"""The concrete codec: table construction, round trips, coding accounting."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdtcomp import engine
from pdtcomp.codec import (
    AlphabetError,
    CodecError,
    Compressor,
    Decompressor,
    MalformedStreamError,
    PopRun,
    build_compressor,
    build_decompressor,
    compress,
    compress_run,
    decompress,
    odd_marker,
    pair_marker,
    pop_run_decomposition,
    stack_bottom,
)
from pdtcomp.engine import Configuration, run, step
from pdtcomp.rewrite import normal_form

words = lambda k, n=120: st.lists(st.integers(0, k - 1), max_size=n)


@pytest.mark.parametrize("k", [2, 3, 7])
def test_compressor_table_shape(k):
    spec = build_compressor(k)
    assert len(spec.transitions) == 2 * k * k + 2 * k
    assert spec.states == frozenset({0, 1})
    assert spec.initial_state == 0
    assert spec.start_symbol == stack_bottom(k)
    assert spec.stack_alphabet == frozenset(range(k)) | {stack_bottom(k)}
    pushes = [t for t in spec.transitions if t.push]
    pops = [t for t in spec.transitions if not t.push]
    assert len(pushes) == 2 * k * k and len(pops) == 2 * k
    assert all(t.push == (t.top, t.symbol) for t in pushes)


@pytest.mark.parametrize("k", [2, 3, 7])
def test_decompressor_table_shape(k):
    spec = build_decompressor(k)
    assert len(spec.transitions) == k * (k + 1) + 3 * k
    eps = [t for t in spec.transitions if t.symbol is engine.EPSILON]
    assert len(eps) == k
    assert all(t.state == 1 and t.next_state == 0 and t.output == (t.top,) for t in eps)


def test_compressor_specific_triples():
    k = 2
    spec = build_compressor(k)
    bottom = stack_bottom(k)
    config, out, _ = step(spec, Configuration(0, (bottom,)), 0)
    assert (config, out) == (Configuration(0, (bottom, 0)), (0,))
    config, out, _ = step(spec, Configuration(1, (bottom, 0)), 0)
    assert (config, out) == (Configuration(0, (bottom,)), (pair_marker(k),))


def test_decompressor_specific_triples():
    k = 2
    spec = build_decompressor(k)
    bottom = stack_bottom(k)
    config, out, _ = step(spec, Configuration(0, (bottom, 0)), odd_marker(k))
    assert (config, out) == (Configuration(0, (bottom,)), (0,))
    config, out, _ = step(spec, Configuration(0, (bottom, 1)), pair_marker(k))
    assert (config, out) == (Configuration(1, (bottom,)), (1,))
    config, out, consumed = step(spec, Configuration(1, (bottom, 0)), 1)
    assert (config, out, consumed) == (Configuration(0, (bottom,)), (0,), False)


def test_compress_examples():
    assert compress([], 2) == []
    assert compress([0, 1, 1, 0], 2) == [0, 1, pair_marker(2)]
    assert compress([0, 0], 2) == [0, odd_marker(2)]
    assert compress([0, 0, 0, 1], 2) == [0, odd_marker(2), 0, 1]


def test_compress_without_flush_is_prefix_coding():
    assert compress([0, 0], 2, flush=False) == [0]
    assert compress([0], 2, flush=False) == [0]  # collides: flush restores injectivity
    assert compress([0], 2) == [0]
    assert compress([0, 0], 2) == [0, odd_marker(2)]


def test_decompress_examples():
    assert decompress([], 2) == []
    assert decompress([0, 1, pair_marker(2)], 2) == [0, 1, 1, 0]
    with pytest.raises(MalformedStreamError):
        decompress([pair_marker(2)], 2)
    with pytest.raises(MalformedStreamError):
        decompress([odd_marker(2)], 2)
    with pytest.raises(MalformedStreamError):
        decompress([0, pair_marker(2)], 2)


def test_alphabet_errors():
    with pytest.raises(AlphabetError):
        compress([0, 2], 2)
    with pytest.raises(AlphabetError):
        compress([odd_marker(2)], 2)
    with pytest.raises(AlphabetError):
        compress([-1], 2)
    with pytest.raises(AlphabetError):
        decompress([stack_bottom(2)], 2)


def test_k_range():
    for bad in (1, 0, -3, 65535, 2.0):
        with pytest.raises(ValueError):
            Compressor(bad)
    assert compress([0], 65534) == [0]


def test_largest_alphabet_without_table():
    k = 65534
    w = [k - 1, k - 1, 5, 4, 4]
    coded = compress(w, k)
    assert coded == [k - 1, odd_marker(k), 5, 4, odd_marker(k)]
    assert decompress(coded, k) == w


@settings(max_examples=150, deadline=None)
@given(st.integers(2, 10), st.data())
def test_roundtrip(k, data):
    w = data.draw(words(k))
    assert decompress(compress(w, k), k) == w


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.data())
def test_fast_path_matches_engine(k, data):
    w = data.draw(words(k))
    engine_out, engine_config, _ = compress_run(w, k)
    assert compress(w, k) == engine_out
    session = Compressor(k)
    fast_out = session.feed(w)
    fast_out += session.flush()
    assert fast_out == engine_out
    assert session.configuration == engine_config
    # unflushed runs agree with the raw table run
    raw = run(build_compressor(k), w)
    assert compress(w, k, flush=False) == list(raw.output)
    assert Compressor(k).feed(w) == list(raw.output)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 6), st.data())
def test_decompressor_matches_engine_on_valid_streams(k, data):
    w = data.draw(words(k))
    coded = compress(w, k)
    raw = run(build_decompressor(k), coded)
    assert decompress(coded, k) == list(raw.output)
    assert raw.config.state == 0
    # both directions keep the same stack: the reduced form of the plain word
    assert raw.config.stack == (stack_bottom(k),) + tuple(normal_form(w))


@settings(max_examples=120, deadline=None)
@given(st.integers(2, 5), st.data())
def test_stack_holds_the_reduced_input(k, data):
    w = data.draw(words(k))
    session = Compressor(k)
    session.feed(w)
    assert list(session.stack) == [stack_bottom(k)] + normal_form(w)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5), st.data())
def test_mirrored_input_drains_the_stack(k, data):
    w = data.draw(words(k))
    session = Compressor(k)
    session.feed(w + w[::-1])
    assert session.stack == (stack_bottom(k),)
    session.flush()
    assert session.state == 0


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5), st.data())
def test_output_length_equals_pushes_plus_run_codings(k, data):
    w = data.draw(words(k))
    out, _, trace = compress_run(w, k)
    pushes = sum(1 for kind in trace.kinds if kind == engine.PUSH)
    runs = pop_run_decomposition(trace)
    assert len(out) == pushes + sum((r.length + 1) // 2 for r in runs)
    assert all(len(r.coding) == (r.length + 1) // 2 for r in runs)


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 5), st.data())
def test_chunked_feeding_matches_one_shot(k, data):
    w = data.draw(words(k))
    cuts = sorted(data.draw(st.lists(st.integers(0, len(w)), max_size=4)))
    session = Compressor(k)
    out = []
    prev = 0
    for cut in cuts + [len(w)]:
        out += session.feed(w[prev:cut])
        prev = cut
    out += session.flush()
    assert out == compress(w, k)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.data())
def test_consume_counters_match_feed(k, data):
    w = data.draw(words(k))
    fed = Compressor(k)
    fed.feed(w)
    counted = Compressor(k)
    counted.consume(w)
    for attr in ("symbols_read", "symbols_written", "savings", "clustered_pops", "state", "stack"):
        assert getattr(fed, attr) == getattr(counted, attr)


def test_pop_run_decomposition_examples():
    _, _, trace = compress_run([0, 1, 1, 0], 2)
    assert pop_run_decomposition(trace) == [PopRun(3, 2, (pair_marker(2),))]
    _, _, trace = compress_run([0, 0], 2)
    assert pop_run_decomposition(trace) == [PopRun(2, 1, (odd_marker(2),))]
    _, _, trace = compress_run([0, 1, 0], 2)
    assert pop_run_decomposition(trace) == []


def test_pop_run_decomposition_odd_run_followed_by_push():
    _, _, trace = compress_run([0, 0, 0, 1], 2)
    assert pop_run_decomposition(trace) == [PopRun(2, 1, (odd_marker(2),))]


def test_pop_run_decomposition_unflushed_trailing_run():
    _, _, trace = compress_run([0, 0], 2, flush=False)
    assert pop_run_decomposition(trace) == [PopRun(2, 1, ())]


def test_session_is_single_use():
    session = Compressor(2)
    session.flush()
    with pytest.raises(CodecError):
        session.feed([0])
    with pytest.raises(CodecError):
        session.flush()


def test_decompressor_counters():
    session = Decompressor(2)
    out = session.feed(compress([0, 1, 1, 0], 2))
    assert out == [0, 1, 1, 0]
    assert session.symbols_read == 3
    assert session.symbols_written == 4
    assert session.stack == (stack_bottom(2),)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.data())
def test_flushed_savings_identity(k, data):
    # read - written == pair markers emitted, on any flushed session
    w = data.draw(words(k))
    session = Compressor(k)
    session.feed(w)
    session.flush()
    assert session.symbols_read - session.symbols_written == session.savings
