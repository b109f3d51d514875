import json

import pytest

from conftest import hpart
from polyinv.mapfile import MapDocument, MapFormatError, dump_map, parse_map, read_map, write_map


def _doc(comps, n=2, convention="X-H", **extra):
    data = {"dimension": n, "convention": convention, "components": comps}
    data.update(extra)
    return json.dumps(data)


def term(exps, num="1", den="1"):
    return {"exponents": exps, "num": num, "den": den}


def test_roundtrip_bit_exact(tmp_path, tri3):
    doc = MapDocument(tri3, "X-H", {"id": "tri", "note": [1, 2]})
    text = dump_map(doc)
    assert dump_map(parse_map(text)) == text
    path = tmp_path / "m.json"
    write_map(doc, path)
    assert read_map(path).H == tri3


def test_corpus_files_roundtrip(corpus):
    from importlib import resources

    root = resources.files("polyinv") / "data" / "corpus"
    for f in root.iterdir():
        if f.name.endswith(".json"):
            text = f.read_text(encoding="utf-8")
            assert dump_map(parse_map(text)) == text, f.name


def test_plus_convention_is_negated():
    doc = parse_map(_doc([[term([0, 2], "3", "2")], []], convention="X+H"))
    assert doc.negated
    assert doc.H == hpart(2, "-3/2*X2^2", "0")
    assert '"num": "3"' in dump_map(doc)


def test_terms_written_in_graded_lex_order():
    doc = parse_map(_doc([[term([0, 2]), term([3, 0]), term([1, 1])], []]))
    text = dump_map(doc)
    assert text.index("[3, 0]") < text.index("[1, 1]") < text.index("[0, 2]")


def test_fractions_reduced():
    doc = parse_map(_doc([[term([0, 2], "4", "6")], []]))
    assert '"num": "2", "den": "3"' in dump_map(doc)


@pytest.mark.parametrize(
    "text",
    [
        _doc([[term([0, 2]), term([0, 2], "2")], []]),  # duplicate exponents
        _doc([[term([0, 2], "1", "0")], []]),
        _doc([[term([0, 2], "1", "-1")], []]),
        _doc([[term([1, 0])], []]),  # linear term
        _doc([[term([0, 2])]]),  # wrong number of components
        _doc([[term([0, 2, 1])], []]),
        _doc([[term([0, -2])], []]),
        _doc([[{"exponents": [0, 2], "num": 1, "den": "1"}], []]),
        _doc([[term([0, 2])], []], convention="X*H"),
        json.dumps({"dimension": 2, "components": [[], []]}),
        "not json",
    ],
)
def test_rejects_malformed(text):
    with pytest.raises(MapFormatError):
        parse_map(text)
