import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from codemit.codes import (REGISTRY_NAMES, CodeError, build_code, codewords, from_parity_check,
                           load_code_file, min_distance_bruteforce, normalize_name, resolve_code)
from codemit.gf2 import BitMatrix
from oracles import DISTANCE, H_ROWS, all_codewords, h_matrix, min_distance

STUDY_CODES = sorted(H_ROWS)


@pytest.mark.parametrize("name", STUDY_CODES)
def test_registry_matrices_match_reference_text(name):
    code = build_code(name)
    assert np.array_equal(code.H.to_array(), h_matrix(name))
    assert (code.n, code.k, code.d) == tuple(int(x) for x in name.strip("[]").split(","))


@pytest.mark.parametrize("name", STUDY_CODES)
def test_declared_distance_equals_enumeration(name):
    code = build_code(name)
    assert min_distance_bruteforce(code) == min_distance(h_matrix(name)) == DISTANCE[name]


@pytest.mark.parametrize("name,pop", [("[11,7,3]", 15), ("[13,7,3]", 14), ("[15,7,3]", 14),
                                      ("[15,7,5]", 30), ("[17,7,3]", 14), ("[17,11,3]", 22)])
def test_parity_popcounts(name, pop):
    assert build_code(name).popcount() == pop


@pytest.mark.parametrize("name", STUDY_CODES)
def test_codewords_match_oracle_and_are_systematic(name):
    code = build_code(name)
    words = codewords(code)
    ref = all_codewords(h_matrix(name))
    ref_int = ref @ (1 << np.arange(code.n - 1, -1, -1))
    assert np.array_equal(words, ref_int)
    msgs = np.arange(1 << code.k)
    assert np.array_equal(words >> code.m, msgs)
    assert all(code.syndrome(int(w)) == 0 for w in words)


@pytest.mark.parametrize("name", REGISTRY_NAMES)
def test_generator_and_check_are_orthogonal(name):
    code = build_code(name)
    assert (code.G @ code.H.transpose()).is_zero()


def test_hamming_fixture_is_perfect():
    code = build_code("hamming-7-4-3")
    assert (code.n, code.k, code.d, code.t) == (7, 4, 3, 1)
    assert sorted(code.columns) == list(range(1, 8))


@pytest.mark.parametrize("raw,key", [("13,7,3", "[13,7,3]"), ("[13, 7, 3]", "[13,7,3]"),
                                     (" [17,11,3] ", "[17,11,3]"), ("Hamming-7-4-3", "hamming-7-4-3")])
def test_name_normalization(raw, key):
    assert normalize_name(raw) == key
    assert build_code(raw).name == key


def test_unknown_code_is_rejected():
    with pytest.raises(CodeError, match="unknown code"):
        build_code("[99,7,3]")


def test_non_systematic_h_is_rejected_with_reason():
    H = BitMatrix.from_rows(["1101010", "1011001", "0111100"])  # last block is not I
    with pytest.raises(CodeError, match="systematic"):
        from_parity_check(H, 3)


def test_wrong_declared_distance_is_rejected():
    H = BitMatrix.from_rows(H_ROWS["[13,7,3]"])
    with pytest.raises(CodeError, match="brute-force distance is 3"):
        from_parity_check(H, 5)


def test_distance_inferred_when_omitted():
    code = build_code(BitMatrix.from_rows(H_ROWS["[15,7,5]"]))
    assert code.d == 5


def test_code_file_round_trip(tmp_path):
    code = build_code("[15,7,5]")
    path = tmp_path / "strong.txt"
    path.write_text(code.parity_check_text())
    loaded = load_code_file(path)
    assert loaded == code
    assert resolve_code(str(path)) == code


@pytest.mark.parametrize("text,match", [
    ("", "empty"),
    ("7 4\n", "expected 'n k d'"),
    ("7 4 3\n1 1 0 1 1 0 0\n", "expected 3 rows"),
    ("7 4 3\n1 1 0 1 1 0 0\n1 0 1 1 0 1 0\n0 1 1 1 0 0 2\n", ":4: expected 7 bits"),
])
def test_code_file_errors_name_the_line(tmp_path, text, match):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(CodeError, match=match):
        load_code_file(path)


@given(st.sampled_from(STUDY_CODES), st.data())
def test_encode_is_linear(name, data):
    code = build_code(name)
    a = data.draw(st.integers(0, 2**code.k - 1))
    b = data.draw(st.integers(0, 2**code.k - 1))
    assert code.encode(a ^ b) == code.encode(a) ^ code.encode(b)


def test_invalid_dimensions():
    with pytest.raises(CodeError):
        from_parity_check(BitMatrix.identity(3), 1)
