import random

import pytest

from blindbuchi.words import (
    BlockLasso,
    IntegerLasso,
    LassoWord,
    decompose_blocks,
    diverges_to_infinity,
    has_finite_liminf,
    is_block_word,
    liminf_value,
    parse_block_lasso,
    parse_integer_lasso,
    parse_lasso,
    unary_block_encode,
    unary_block_encode_prefix,
)


def test_lasso_rejects_empty_period():
    with pytest.raises(ValueError):
        LassoWord("ab", "")
    with pytest.raises(ValueError):
        parse_lasso("a|")


def test_lasso_expand_and_letters():
    w = LassoWord("a", "ba")
    assert w.expand(7) == "abababa"
    assert [w.letter_at(i) for i in range(5)] == list("ababa")


def test_canonical_form_merges_presentations():
    assert LassoWord("a", "ba").canonical() == LassoWord("", "ab")
    assert LassoWord("", "abab").canonical() == LassoWord("", "ab")
    assert LassoWord("a", "ba").denotes_same_word(LassoWord("", "ab"))
    assert not LassoWord("", "ab").denotes_same_word(LassoWord("", "ba"))


def test_in_block_language_examples():
    assert is_block_word(parse_lasso("|ab")) is True
    assert is_block_word(parse_lasso("a|b")) is False  # finitely many a's
    assert is_block_word(parse_lasso("b|ab")) is False  # starts with b


def test_block_word_rejects_foreign_letters():
    with pytest.raises(ValueError):
        is_block_word(parse_lasso("|ac"))


def test_decompose_examples():
    assert decompose_blocks(parse_lasso("|ab")) == BlockLasso((), ((1, 1),))
    assert decompose_blocks(parse_lasso("a|ba")) == BlockLasso((), ((1, 1),))
    assert decompose_blocks(parse_lasso("|aab")) == BlockLasso((), ((2, 1),))
    assert decompose_blocks(parse_lasso("|abaaaaab")) == BlockLasso((), ((1, 1), (5, 1)))


def test_decompose_requires_block_form():
    with pytest.raises(ValueError):
        decompose_blocks(parse_lasso("b|ab"))


def test_decompose_round_trip_random():
    rng = random.Random(7)
    for _ in range(200):
        u = "".join(rng.choice("ab") for _ in range(rng.randint(0, 4)))
        v = "".join(rng.choice("ab") for _ in range(rng.randint(1, 6)))
        w = LassoWord(u, v)
        if not ("a" in v and "b" in v and (u or v)[0] == "a"):
            continue
        blocks = decompose_blocks(w)
        horizon = 3 * (len(u) + len(v)) + len(blocks.to_word().prefix) + 6
        assert blocks.to_word().expand(horizon) == w.expand(horizon)


def test_block_lasso_validation():
    with pytest.raises(ValueError):
        BlockLasso((), ())
    with pytest.raises(ValueError):
        BlockLasso(((0, 1),), ((1, 1),))


def test_encode_examples():
    assert unary_block_encode(IntegerLasso((), (0,))) == LassoWord("", "ab")
    assert unary_block_encode(IntegerLasso((), (0, 1))) == LassoWord("", "abaabb")
    assert unary_block_encode(IntegerLasso((2,), (0,))) == LassoWord("aaabbb", "ab")


def test_encode_prefix_examples():
    assert unary_block_encode_prefix(lambda i: 0, 2) == "abab"
    assert unary_block_encode_prefix(lambda i: i, 3) == "ab" + "aabb" + "aaabbb"
    assert unary_block_encode_prefix(lambda i: 1, 1) == "aabb"
    with pytest.raises(ValueError):
        unary_block_encode_prefix(lambda i: -1, 1)


def test_encode_prefix_determinacy():
    rng = random.Random(11)
    for _ in range(50):
        shared = [rng.randint(0, 5) for _ in range(6)]
        tail_a = [rng.randint(0, 5) for _ in range(4)]
        tail_b = [rng.randint(0, 5) for _ in range(4)]
        gen_a = (shared + tail_a).__getitem__
        gen_b = (shared + tail_b).__getitem__
        agree = sum(2 * (m + 1) for m in shared)
        out_a = unary_block_encode_prefix(gen_a, 10)
        out_b = unary_block_encode_prefix(gen_b, 10)
        assert out_a[:agree] == out_b[:agree]


def test_encode_output_always_block_form_with_equal_runs():
    rng = random.Random(13)
    for _ in range(100):
        x = IntegerLasso(
            tuple(rng.randint(0, 5) for _ in range(rng.randint(0, 3))),
            tuple(rng.randint(0, 5) for _ in range(rng.randint(1, 4))),
        )
        w = unary_block_encode(x)
        assert is_block_word(w)
        blocks = decompose_blocks(w)
        for n, k in blocks.prefix_blocks + blocks.period_blocks:
            assert n == k


def test_encode_injective_on_canonical_samples():
    rng = random.Random(17)
    points = set()
    for _ in range(120):
        x = IntegerLasso(
            tuple(rng.randint(0, 4) for _ in range(rng.randint(0, 3))),
            tuple(rng.randint(0, 4) for _ in range(rng.randint(1, 4))),
        ).canonical()
        points.add(x)
    points = sorted(points, key=lambda x: (x.prefix, x.period))
    words = [unary_block_encode(x) for x in points]
    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            wi, wj = words[i], words[j]
            horizon = len(wi.prefix) + len(wj.prefix) + 2 * len(wi.period) * len(wj.period) + 2
            assert wi.expand(horizon) != wj.expand(horizon), (points[i], points[j])


def test_liminf_closed_forms():
    x = IntegerLasso((9,), (3, 1, 2))
    assert liminf_value(x) == 1
    assert has_finite_liminf(x) is True
    assert diverges_to_infinity(x) is False
    assert liminf_value(IntegerLasso((), (0,))) == 0
    assert liminf_value(IntegerLasso((5, 5), (7,))) == 7


def test_integer_lasso_parsing():
    assert parse_integer_lasso("|0") == IntegerLasso((), (0,))
    assert parse_integer_lasso("9,9|1") == IntegerLasso((9, 9), (1,))
    with pytest.raises(ValueError):
        parse_integer_lasso("1|")
    with pytest.raises(ValueError):
        parse_integer_lasso("1,2")


def test_block_lasso_parsing():
    assert parse_block_lasso("|1:1") == BlockLasso((), ((1, 1),))
    assert parse_block_lasso("2:2|1:1,5:1") == BlockLasso(((2, 2),), ((1, 1), (5, 1)))
    with pytest.raises(ValueError):
        parse_block_lasso("|1")
