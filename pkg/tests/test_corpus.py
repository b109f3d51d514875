from pathlib import Path

import pytest

from polyinv.corpus import (
    CorpusEntry,
    GeneratorSpec,
    SplitMix64,
    SuiteCaps,
    builtin_entries,
    check_entry,
    exhaustive_fern_check,
    fern_specs,
    generate_dense,
    generate_triangular,
    load_corpus,
    run_suite,
    seeded_entries,
    unimodular_matrix,
    write_corpus,
)
from polyinv.nilpotency import nilpotency_report, strong_index
from polyinv.polymap import keller_check, rat_inverse, rat_matrix
from polyinv.trees import FernSpec, fern_sum

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(scope="module")
def builtins():
    return builtin_entries()


def test_splitmix_reference_values():
    # first outputs for seed 0, as published with the algorithm
    rng = SplitMix64(0)
    assert [rng.next() for _ in range(3)] == [
        0xE220A8397B1DCDAF,
        0x6E789E6AA1B965F4,
        0x06C45D188009454F,
    ]


def test_generators_are_deterministic():
    spec = GeneratorSpec(3, 3, 42, conjugate=True)
    assert generate_triangular(spec) == generate_triangular(spec)
    assert generate_dense(3, 2, 5) == generate_dense(3, 2, 5)
    assert generate_triangular(GeneratorSpec(3, 3, 42)) != generate_triangular(GeneratorSpec(3, 3, 43))


def test_n2_generator_structure():
    for seed in range(10):
        H = generate_triangular(GeneratorSpec(2, 3, seed))
        assert H[1].is_zero()
        assert H[0]
        assert all(a[0] == 0 for a in H[0].terms)


def test_unimodular_matrices():
    for seed in range(10):
        T = unimodular_matrix(3, SplitMix64(seed))
        Ti = rat_inverse(rat_matrix(T))
        assert all(x.denominator == 1 for row in Ti for x in row)


def test_golden_nilpotency_report():
    H = generate_triangular(GeneratorSpec(3, 2, 3, conjugate=True))
    expected = (GOLDEN / "nilpotency-n3-d2-s3-conj.txt").read_text()
    assert nilpotency_report(H).render() == expected


@pytest.mark.parametrize("n, d", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_generated_maps_are_keller_and_strongly_nilpotent(n, d):
    for seed in range(5):
        for conj in (False, True):
            H = generate_triangular(GeneratorSpec(n, d, seed, conjugate=conj))
            assert keller_check(H)
            p = strong_index(H)
            assert p is not None and p <= n


def test_conjugation_keeps_strong_index():
    for seed in range(8):
        a = generate_triangular(GeneratorSpec(3, 2, seed))
        b = generate_triangular(GeneratorSpec(3, 2, seed, conjugate=True))
        assert strong_index(a) == strong_index(b)


def test_builtin_entries_match_packaged_corpus(tmp_path, builtins):
    paths = write_corpus(builtins, tmp_path)
    packaged = load_corpus()
    assert [e.id for e in packaged] == [e.id for e in builtins]
    for path, entry in zip(paths, packaged):
        assert path.read_text() == entry.to_text()


def test_entry_round_trip(builtins):
    e = builtins[4]
    again = CorpusEntry.from_text(e.to_text())
    assert again.id == e.id and again.H == e.H and again.expected == e.expected
    assert again.doc.convention == "X+H"


def test_fern_check_agrees_with_direct_sums(tri3):
    total, bad = exhaustive_fern_check(tri3, 3, 2)
    assert bad is None
    assert total == sum(1 for _ in fern_specs(3, 3, 2)) // 9
    assert all(fern_sum(tri3, s) == 0 for s in fern_specs(3, 3, 1))


def test_fern_check_finds_violation_below_strong_index(tri3):
    # with p = 2 < strong index 3 the fern products do not all vanish
    total, bad = exhaustive_fern_check(tri3, 2, 2)
    assert bad is not None
    i, j, alphas, val = bad
    assert fern_sum(tri3, FernSpec(i, j, alphas)) == val != 0


def test_suite_entries_pass_and_are_deterministic(corpus):
    small = [e for e in corpus if e.H.n <= 3]
    caps = SuiteCaps(truncation_max_alpha=4)
    a = run_suite(small, caps)
    b = run_suite(small, caps)
    assert a.passed
    assert a.to_json() == b.to_json()
    assert a.render().endswith(f"{len(small)}/{len(small)} entries passed\n")


def test_suite_flags_wrong_pin(corpus):
    entry = CorpusEntry.from_text(corpus[2].to_text())
    entry.expected["inverse_degree"] = {"value": 5, "source": "derived"}
    res = check_entry(entry, SuiteCaps(truncation_max_alpha=3))
    assert not res.passed
    assert [c.name for c in res.checks if c.status == "fail"] == ["inverse_degree"]


def test_van_den_essen_violation_is_expected(corpus):
    vde = next(e for e in corpus if e.id == "van-den-essen-n5")
    res = check_entry(vde, SuiteCaps(tree_max_n=3))
    statuses = {c.name: c.status for c in res.checks}
    assert statuses["bound d^(e-1)"] == "expected-violation"
    assert statuses["bound d^(p-1)"] == "pass"
    assert res.passed


def test_pins_match_recomputation(corpus, builtins):
    fresh = {e.id: e.expected for e in builtins}
    for entry in corpus:
        assert fresh[entry.id] == entry.expected


def test_seeded_entries():
    es = seeded_entries(9)
    assert len(es) == 4
    assert [e.id for e in es] == [e.id for e in seeded_entries(9)]
    assert all(keller_check(e.H) for e in es)
