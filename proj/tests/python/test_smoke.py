"""Smoke tests for the python bindings: parse, score, generate, render."""

import json

import pytest

flowkit = pytest.importorskip("flowkit")


FIXTURE = {
    "type": "flow",
    "scope": "global",
    "trigger": {
        "type": "weekly",
        "inputs": [
            {"name": "day_of_week", "value": "3"},
            {"name": "time", "value": "1970-01-01 16:45:00"},
        ],
    },
    "components": [
        {
            "category": "action",
            "definition": "look_up_records",
            "scope": "global",
            "order": 1,
            "inputs": [{"name": "table", "value": "incident_task"}],
        },
        {
            "category": "flowlogic",
            "definition": "FOREACH",
            "scope": "global",
            "order": 2,
            "inputs": [{"name": "items", "value": "{{1.Records}}"}],
        },
    ],
}


def test_parse_serialize_round_trip():
    flow = flowkit.parse_flow(json.dumps(FIXTURE))
    again = flowkit.parse_flow(flowkit.serialize_flow(flow))
    assert again == flow
    assert flow.trigger.trigger_type == "weekly"
    assert [c.definition for c in flow.components] == ["look_up_records", "FOREACH"]
    assert len(flowkit.content_id(flow)) == 16


def test_parse_rejects_bad_input():
    with pytest.raises(ValueError):
        flowkit.parse_flow("{\"type\": \"flow\", \"components\": []}")


def test_extract_from_fenced_output():
    raw = "Sure!\n```json\n" + json.dumps(FIXTURE) + "\n```\n"
    flow = flowkit.extract_flow(raw)
    assert flow == flowkit.parse_flow(json.dumps(FIXTURE))


def test_metric_identities():
    flow = flowkit.parse_flow(json.dumps(FIXTURE))
    assert flowkit.flow_sim(flow, flow, include_inputs=True) == 1.0
    assert flowkit.tree_bleu(flow, flow, include_inputs=False) == 1.0
    assert flowkit.trigger_match(flow, flow) == 1
    assert flowkit.component_match(flow, flow) == 1.0
    result = flowkit.evaluate(flowkit.serialize_flow(flow), flow)
    assert result.to_dict()["flow_sim_with_inputs"] == 1.0
    garbage = flowkit.evaluate("no json at all", flow)
    assert garbage.to_dict()["component_match"] == 0.0


def test_generation_is_deterministic():
    a = flowkit.generate_flow("scheduled_loop", seed=11)
    b = flowkit.generate_flow("scheduled_loop", seed=11)
    c = flowkit.generate_flow("scheduled_loop", seed=12)
    assert a == b
    assert a != c
    assert a.components[0].definition == "look_up_records"

    batch = flowkit.generate_dataset(25, seed=3)
    assert len(batch) == 25
    assert len({flowkit.content_id(f) for f in batch}) == 25


def test_pattern_names_cover_registry():
    names = flowkit.pattern_names()
    assert "scheduled_loop" in names
    assert "crud_loop" in names
    assert len(names) == 17


def test_split_partitions_ids():
    ids = [f"id-{i}" for i in range(10)]
    manifest = flowkit.split_ids(ids, (0.5, 0.25, 0.25), seed=4)
    parts = [manifest["train"], manifest["valid"], manifest["test"]]
    assert [len(p) for p in parts] == [5, 3, 2]
    assert sorted(ids) == sorted(sum(parts, []))


def test_to_dot_emits_graphviz():
    flow = flowkit.generate_flow("crud_loop", seed=1)
    dot = flowkit.to_dot(flow, style_seed=9)
    assert dot.startswith("digraph flow {")
    assert dot.rstrip().endswith("}")
    assert "shape=ellipse" in dot
