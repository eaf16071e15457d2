import pytest
from hypothesis import given
from hypothesis import strategies as st

from gamechain.codec import U32_MAX, U64_MAX, Reader, Writer, write_map
from gamechain.errors import DecodeError


def test_u64_is_big_endian():
    w = Writer()
    w.u64(1)
    assert w.getvalue() == b"\x00\x00\x00\x00\x00\x00\x00\x01"
    w = Writer()
    w.u64(0x0102030405060708)
    assert w.getvalue() == bytes([1, 2, 3, 4, 5, 6, 7, 8])


def test_bytes_uses_four_byte_length_prefix():
    w = Writer()
    w.bytes_(b"abc")
    assert w.getvalue() == b"\x00\x00\x00\x03abc"


@pytest.mark.parametrize("value", [-1, U64_MAX + 1])
def test_u64_range_enforced(value):
    with pytest.raises(ValueError):
        Writer().u64(value)


@pytest.mark.parametrize("value", [-1, U32_MAX + 1])
def test_u32_range_enforced(value):
    with pytest.raises(ValueError):
        Writer().u32(value)


def test_raw_length_check():
    with pytest.raises(ValueError):
        Writer().raw(b"abc", 4)


@given(st.integers(min_value=0, max_value=U64_MAX))
def test_u64_round_trip(value):
    w = Writer()
    w.u64(value)
    r = Reader(w.getvalue())
    assert r.u64() == value
    r.expect_end()


@given(st.binary(max_size=300))
def test_bytes_round_trip(data):
    w = Writer()
    w.bytes_(data)
    r = Reader(w.getvalue())
    assert r.bytes_() == data
    r.expect_end()


@given(st.text(max_size=200))
def test_str_round_trip(text):
    w = Writer()
    w.str_(text)
    r = Reader(w.getvalue())
    assert r.str_() == text
    r.expect_end()


def test_reader_rejects_truncation():
    w = Writer()
    w.u64(7)
    data = w.getvalue()[:-1]
    with pytest.raises(DecodeError):
        Reader(data).u64()


def test_reader_rejects_truncated_length_prefix_body():
    w = Writer()
    w.bytes_(b"hello")
    data = w.getvalue()[:-2]
    with pytest.raises(DecodeError):
        Reader(data).bytes_()


def test_expect_end_rejects_trailing_bytes():
    r = Reader(b"\x00")
    with pytest.raises(DecodeError):
        r.expect_end()


def test_invalid_utf8_rejected():
    w = Writer()
    w.bytes_(b"\xff\xfe")
    with pytest.raises(DecodeError):
        Reader(w.getvalue()).str_()


@given(st.dictionaries(st.integers(min_value=0, max_value=U64_MAX), st.integers(min_value=0, max_value=U64_MAX), max_size=20))
def test_map_entries_sorted_by_encoded_key(items):
    w = Writer()
    write_map(w, items, lambda w, k: w.u64(k), lambda w, v: w.u64(v))
    r = Reader(w.getvalue())
    count = r.u32()
    assert count == len(items)
    keys = []
    for _ in range(count):
        key = r.u64()
        value = r.u64()
        assert items[key] == value
        keys.append(key)
    r.expect_end()
    # Big-endian u64 keys sort bytewise exactly as integers sort.
    assert keys == sorted(items)


@given(st.dictionaries(st.text(max_size=8), st.integers(min_value=0, max_value=100), max_size=12))
def test_map_insertion_order_is_irrelevant(items):
    w1 = Writer()
    write_map(w1, items, lambda w, k: w.str_(k), lambda w, v: w.u64(v))
    reversed_items = dict(reversed(list(items.items())))
    w2 = Writer()
    write_map(w2, reversed_items, lambda w, k: w.str_(k), lambda w, v: w.u64(v))
    assert w1.getvalue() == w2.getvalue()
