import json
from pathlib import Path

import pytest

from milnor import corpus, fileio
from milnor.bundles import Cocycle
from milnor.fileio import InputError
from milnor.groups import FinitelyPresentedGroup
from milnor.loops import EdgePathGroup

DATA = Path(__file__).resolve().parent.parent / "data"


def test_shipped_files_are_canonical():
    for path in sorted(DATA.glob("*")):
        if path.suffix in {".cx", ".grp", ".coc", ".map", ".hom", ".sq", ".pres"} or path.name.endswith("manifest.json"):
            text = path.read_text()
            assert fileio.dumps(json.loads(text)) == text, path.name


def test_complex_round_trip(tmp_path):
    for name, K in corpus.complexes().items():
        p = tmp_path / f"{name}.cx"
        fileio.dump(fileio.complex_to_dict(K), p)
        first = p.read_bytes()
        L = fileio.load_complex(p.name, tmp_path)
        assert L == K
        fileio.dump(fileio.complex_to_dict(L), p)
        assert p.read_bytes() == first


def test_group_round_trip(tmp_path):
    for name, G in corpus.groups().items():
        p = tmp_path / f"{name}.grp"
        fileio.dump(fileio.group_to_dict(G), p)
        H = fileio.load_group(p.name, tmp_path)
        assert H == G
        fileio.dump(fileio.group_to_dict(H), p)
        assert fileio.dumps(fileio.group_to_dict(H)) == p.read_text()


def test_group_formats():
    S3 = fileio.load_group("S3_perm.grp", DATA)
    assert S3.order == 6 and not S3.is_abelian
    F = fileio.load_group("free2.pres", DATA)
    assert isinstance(F, FinitelyPresentedGroup) and len(F.generators) == 2
    pi = fileio.load_group({"pi1": "corpus:torus"}, DATA)
    assert isinstance(pi, EdgePathGroup)
    assert fileio.load_group("corpus:S3") is corpus.groups()["S3"]


def test_cocycle_round_trip(tmp_path):
    for path in sorted(DATA.glob("*.coc")):
        c = fileio.load_cocycle(path.name, DATA)
        out = tmp_path / path.name
        fileio.dump(fileio.cocycle_to_dict(c), out)
        d = fileio.load_cocycle(out.name, tmp_path)
        assert d == c
        text = out.read_text()
        fileio.dump(fileio.cocycle_to_dict(d), out)
        assert out.read_text() == text


def test_cocycle_defaults_to_identity():
    c = fileio.load_cocycle({"complex": "corpus:circle", "group": "corpus:Z2", "values": []})
    assert c == Cocycle.trivial(corpus.complexes()["circle"], corpus.groups()["Z2"])


def test_map_and_hom_round_trip(tmp_path):
    for f in corpus.maps().values():
        g = fileio.load_map(fileio.map_to_dict(f))
        assert (g.source, g.target, g.mapping, g.pointed) == (f.source, f.target, f.mapping, f.pointed)
    for a in corpus.homs().values():
        assert fileio.load_hom(fileio.hom_to_dict(a)) == a
    h = fileio.load_hom("circle_pi1_to_s3.hom", DATA)
    assert isinstance(h.source, EdgePathGroup)


def test_square():
    sq = fileio.load_square("wrap_s3_sign.sq", DATA)
    assert set(sq) >= {"X", "Y", "map", "G", "H", "hom"}


@pytest.mark.parametrize("payload, message", [
    ('{"vertices": ["0"], ', "1:"),
    ('[1, 2]', "must be a JSON object"),
    ('{"vertices": ["0", "1"]}', "facets"),
    ('{"vertices": ["0", "1"], "facets": [["0", "7"]]}', "invalid complex"),
])
def test_complex_errors(tmp_path, payload, message):
    p = tmp_path / "bad.cx"
    p.write_text(payload)
    with pytest.raises(InputError, match=message):
        fileio.load_complex(p.name, tmp_path)


def test_parse_error_position(tmp_path):
    p = tmp_path / "bad.cx"
    p.write_text('{\n  "vertices": ["0",\n}\n')
    with pytest.raises(InputError, match=r"bad.cx:3:1"):
        fileio.load_complex(p.name, tmp_path)


def test_missing_file():
    with pytest.raises(InputError, match="no such file"):
        fileio.load_complex("nowhere.cx", DATA)


def test_bad_references():
    with pytest.raises(InputError):
        fileio.load_group("corpus:Z17")
    with pytest.raises(InputError):
        fileio.load_group({"name": "nothing"})
    with pytest.raises(InputError, match="not an element"):
        fileio.load_cocycle({"complex": "corpus:circle", "group": "corpus:Z2", "values": [["0", "1", "7"]]})
    with pytest.raises(InputError, match="no image"):
        fileio.load_hom({"source": {"pi1": "corpus:circle"}, "target": "corpus:Z2", "images": {}})
    with pytest.raises(InputError):
        fileio.load_hom({"source": "corpus:Z2", "target": "corpus:Z3", "images": {"1": "1"}})
