import json

import networkx as nx
import pytest

from relhyp_hub.core.examples import list_examples, load_example
from relhyp_hub.core.exceptions import SchemaError, ValidationError
from relhyp_hub.core.groups import FiniteTable, FinitelyPresented, FreeProductOfFinites
from relhyp_hub.core.schemas import (
    apply_assignment,
    check_version,
    dump_assignment,
    dump_complex,
    load_complex,
    load_graph,
    load_group,
)
from relhyp_hub.infra.storage import ArtifactStorage, dumps


def test_bundled_examples():
    assert list_examples() == ["amalgam-4-2-6", "genus2", "theta-free", "zz-horoball"]
    assert load_example("zz-horoball").kind == "cusped"
    with pytest.raises(ValidationError):
        load_example("missing")


def test_group_backends():
    assert isinstance(load_group({"cyclic_order": 3, "generator": "s"}), FiniteTable)
    fp = load_group({"backend": "fp", "generators": ["a", "b"], "relators": ["a^3", "b^2", "a*b*a*b"]})
    assert isinstance(fp, FinitelyPresented)
    assert fp.order() == 6
    product = load_group({"backend": "free_product", "factors": [{"cyclic_order": 2, "generator": "s"},
                                                                 {"cyclic_order": 3, "generator": "t"}]})
    assert isinstance(product, FreeProductOfFinites)


def test_unknown_backend():
    with pytest.raises(SchemaError):
        load_group({"backend": "matrix"})


def test_schema_version_is_checked():
    check_version({}, "empty")
    with pytest.raises(SchemaError):
        check_version({"schema_version": 2}, "future")


def test_complex_survives_dump_and_load(genus2_cog):
    data = json.loads(dumps(dump_complex(genus2_cog)))
    restored = load_complex(data)
    assert restored.to_dict() == genus2_cog.to_dict()


def test_psi_for_unknown_arrow():
    data = load_example("amalgam-4-2-6").data["complex"]
    broken = {**data, "psi": {**data["psi"], "u/e": ["x"]}}
    with pytest.raises(SchemaError):
        load_complex(broken)


def test_assignment_replaces_peripherals(genus2_cog):
    assignment = dump_assignment(genus2_cog)
    assignment["peripherals"]["u"] = [["a1*b1*a1^-1*b1^-1"], ["a1"]]
    updated = apply_assignment(genus2_cog, assignment)
    assert len(updated.peripherals["u"]) == 2
    assert len(genus2_cog.peripherals["u"]) == 1


def test_graph_schema():
    vertices = [{"id": i, "tag": f"x{i}"} for i in range(3)]
    graph = load_graph({"edges": [[0, 1, "a"], [1, 2, "a"]], "name": "path", "vertices": vertices})
    assert graph.vertex_count == 3
    assert load_graph(graph.to_dict()).edge_count == 2
    with pytest.raises(SchemaError):
        load_graph({"edges": [[0, 5, ""]], "vertices": vertices[:1]})
    with pytest.raises(SchemaError):
        load_graph({"vertices": vertices})


def test_dumps_sorts_keys():
    assert dumps({"b": 1, "a": {"d": 2, "c": 3}}) == dumps({"a": {"c": 3, "d": 2}, "b": 1})
    assert dumps({"b": 1, "a": 2}).index('"a"') < dumps({"b": 1, "a": 2}).index('"b"')


def test_storage_writes_artifacts(tmp_path):
    storage = ArtifactStorage(str(tmp_path / "out"))
    path = storage.save_json("report.json", {"status": "PASS"})
    assert ArtifactStorage.load_json(path) == {"status": "PASS"}

    graph = nx.path_graph(3)
    graph.nodes[0]["rep"] = (1, 2)
    dot = storage.export_graph("g.dot", graph, "dot")
    graphml = storage.export_graph("g.graphml", graph, "graphml")
    assert "graph" in open(dot, encoding="utf-8").read()
    assert "<graphml" in open(graphml, encoding="utf-8").read()
    with pytest.raises(SchemaError):
        storage.export_graph("g.txt", graph, "txt")


def test_load_json_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(SchemaError):
        ArtifactStorage.load_json(str(bad))
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(SchemaError):
        ArtifactStorage.load_json(str(listing))
