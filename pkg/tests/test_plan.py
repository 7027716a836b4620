import pytest

from pxtmesh.graph import UNBOUNDED, EdgeId, Graph, Walk
from pxtmesh.plan import (
    AllocationPlan,
    Demand,
    PlanEntry,
    PlanError,
    PXT,
)


def walk(*seq):
    items = []
    for x in seq:
        items.append(EdgeId(*x) if isinstance(x, tuple) else x)
    return Walk.from_sequence(items)


def entry(did, u, v, working, protection):
    return PlanEntry(Demand(did, u, v), working, protection)


# shared edge specs on the five-node fixture (fresh ordinals as each scheme
# would materialize them: workings take ordinal 0 of their direct links)
AB = ("A", "B", 0)
CD = ("C", "D", 0)
CA = ("C", "A", 0)
AE = ("A", "E", 0)
EB = ("E", "B", 0)
ED = ("E", "D", 0)
DB = ("D", "B", 0)


def d1_shared(five_node):
    """First demand routed as in the shared-bandwidth example: protection rides
    A-E-D-B so both its middle links can be shared later."""
    return entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", ED, "D", DB, "B"))


def d2_shared():
    return entry(1, "C", "D", walk("C", CD, "D"), walk("C", CA, "A", AE, "E", ED, "D"))


class TestAddEntry:
    def test_single_entry_single_pxt(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        assert plan.validate() == []
        [pxt] = plan.pxts
        assert not pxt.closed
        assert pxt.walk.edges == (EdgeId(*AE), EdgeId(*EB))

    def test_overlapping_protections_merge_into_one_pxt(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        plan.add_entry(d2_shared())
        assert plan.validate() == []
        [pxt] = plan.pxts
        assert not pxt.closed
        assert pxt.walk.length == 4
        assert pxt.walk.nodes in (("C", "A", "E", "D", "B"), ("B", "D", "E", "A", "C"))

    def test_branch_point_rejected(self, five_node):
        # same two demands, but the first protection goes A-E-B: sharing A-E
        # then forces E to choose between E-B and E-D
        plan = AllocationPlan(five_node)
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        with pytest.raises(PlanError) as exc:
            plan.add_entry(d2_shared())
        v = exc.value.violations[0]
        assert v.condition == "d"
        assert "at E" in v.witness
        # failed add must not have mutated anything
        assert len(plan.entries) == 1
        assert plan.validate() == []

    def test_capacity_exhausted(self):
        g = Graph("ABC", [("A", "B", 1), ("B", "C", UNBOUNDED), ("A", "C", UNBOUNDED)])
        plan = AllocationPlan(g)
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"),
                             walk("A", ("A", "C", 0), "C", ("C", "B", 0), "B")))
        with pytest.raises(PlanError, match="capacity"):
            plan.fresh_edge("A", "B")

    def test_condition_a_rejected(self, five_node):
        plan = AllocationPlan(five_node)
        bad = entry(0, "A", "B", walk("A", AB, "B"), walk("A", ("A", "B", 1), "B"))
        with pytest.raises(PlanError) as exc:
            plan.add_entry(bad)
        assert exc.value.violations[0].condition == "a"

    def test_condition_b_rejected(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        reuse = entry(1, "A", "B", walk("A", AB, "B"), walk("A", ("A", "E", 1), "E", ("E", "B", 1), "B"))
        with pytest.raises(PlanError) as exc:
            plan.add_entry(reuse)
        assert {v.condition for v in exc.value.violations} == {"b"}

    def test_condition_c_rejected(self, five_node):
        # two copies of the same demand must not share a protection edge
        plan = AllocationPlan(five_node)
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        copy = entry(1, "A", "B", walk("A", ("A", "B", 1), "B"), walk("A", AE, "E", EB, "B"))
        with pytest.raises(PlanError) as exc:
            plan.add_entry(copy)
        assert exc.value.violations[0].condition == "c"


class TestValidate:
    def test_empty_plan(self, five_node):
        assert AllocationPlan(five_node).validate() == []

    def test_branch_point_reported(self, five_node):
        plan = AllocationPlan(five_node, enforce="abc")
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        plan.add_entry(d2_shared())
        violations = plan.validate()
        assert [v.condition for v in violations] == ["d"]
        assert "at E" in violations[0].witness
        assert "A~E#0" in violations[0].witness
        assert plan.branch_points() == {"E"}

    def test_clean_shared_plan_has_no_branch_points(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        plan.add_entry(d2_shared())
        assert plan.branch_points() == set()

    def test_condition_c_between_copies(self, five_node):
        plan = AllocationPlan(five_node, enforce="ab")
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        plan.add_entry(entry(1, "A", "B", walk("A", ("A", "B", 1), "B"),
                             walk("A", AE, "E", EB, "B")))
        conditions = {v.condition for v in plan.validate()}
        assert "c" in conditions


class TestPXTs:
    def test_closed_pxt(self):
        # triangle: three demands whose protections chain around the cycle
        g = Graph("ABC", [("A", "B", 2), ("B", "C", 2), ("A", "C", 2)])
        plan = AllocationPlan(g)
        plan.add_entry(entry(0, "A", "B", walk("A", ("A", "B", 0), "B"),
                             walk("A", ("A", "C", 1), "C", ("C", "B", 1), "B")))
        plan.add_entry(entry(1, "B", "C", walk("B", ("B", "C", 0), "C"),
                             walk("B", ("A", "B", 1), "A", ("A", "C", 1), "C")))
        plan.add_entry(entry(2, "A", "C", walk("A", ("A", "C", 0), "C"),
                             walk("A", ("A", "B", 1), "B", ("B", "C", 1), "C")))
        assert plan.validate() == []
        [pxt] = plan.pxts
        assert pxt.closed
        assert pxt.walk.length == 3
        assert pxt.walk.closed

    def test_extract_matches_incremental(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        assert plan.extract_pxts() == plan.pxts
        plan.add_entry(d2_shared())
        assert plan.extract_pxts() == plan.pxts

    def test_extraction_partitions_protection_edges(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        plan.add_entry(d2_shared())
        pxts = plan.extract_pxts()
        all_edges = [e for p in pxts for e in p.walk.edges]
        assert len(all_edges) == len(set(all_edges))
        expected = {e for en in plan.entries for e in en.protection.edges}
        assert set(all_edges) == expected

    def test_extract_on_invalid_plan_raises(self, five_node):
        plan = AllocationPlan(five_node, enforce="abc")
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        plan.add_entry(d2_shared())
        with pytest.raises(PlanError):
            plan.extract_pxts()


class TestBandwidth:
    def test_shared_edges_counted_once(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        plan.add_entry(d2_shared())
        assert plan.bandwidth() == (2, 4, 6)

    def test_empty(self, five_node):
        assert AllocationPlan(five_node).bandwidth() == (0, 0, 0)

    def test_no_sharing_sums_lengths(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        plan.add_entry(entry(1, "C", "D", walk("C", CD, "D"),
                             walk("C", CA, "A", ("A", "E", 1), "E", ("E", "D", 0), "D")))
        w, p, t = plan.bandwidth()
        assert (w, p, t) == (2, 5, 7)


class TestSerialization:
    def test_round_trip(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        plan.add_entry(d2_shared())
        text = plan.serialize()
        again = AllocationPlan.parse(five_node, text)
        assert again.serialize() == text
        assert again.validate() == plan.validate() == []
        assert again.bandwidth() == plan.bandwidth()
        assert again.extract_pxts() == plan.extract_pxts()

    def test_cap_and_grow_preserves_existing_entries(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        before = [e.serialize() for e in plan.entries]
        plan.add_entry(d2_shared())
        after = [e.serialize() for e in plan.entries[:1]]
        assert before == after

    def test_parse_rejects_garbage(self, five_node):
        with pytest.raises(PlanError):
            AllocationPlan.parse(five_node, "not a plan\n")

    def test_serialize_mentions_crossconnects(self, five_node):
        plan = AllocationPlan(five_node)
        plan.add_entry(d1_shared(five_node))
        text = plan.serialize()
        assert "xc E A~E#0 D~E#0" in text
        assert any(l.startswith("pxt open") for l in text.splitlines())


class TestFreshEdges:
    def test_ordinals_increase(self, five_node):
        plan = AllocationPlan(five_node)
        assert plan.fresh_edge("A", "B") == EdgeId("A", "B", 0)
        plan.add_entry(entry(0, "A", "B", walk("A", AB, "B"), walk("A", AE, "E", EB, "B")))
        assert plan.fresh_edge("A", "B") == EdgeId("A", "B", 1)
        assert plan.fresh_edge("A", "E") == EdgeId("A", "E", 1)
        assert plan.fresh_edge("C", "D") == EdgeId("C", "D", 0)
