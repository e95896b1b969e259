import pytest

from urbandtn.config import GroupSpec
from urbandtn.geo import geodesic_distance
from urbandtn.mobility import AgentState
from urbandtn.routing import BufferEntry, Message, create_protocol, find_level, resolve_protocol
from urbandtn.timer import Clock

PATH_TYPES = {"footpath": 1, "remote": 2, "highway": 3}
HERE = (19.04, 72.85)


def grp(paths):
    return GroupSpec("g", "G", tuple(paths), 1, 50.0, 10.0, True, "PathType", "Epidemic")


def make(obj_id, protocol="Epidemic", level=0, pos=HERE, tx=50.0, msgs=()):
    a = AgentState(obj_id, "g", "PathType", 0, 0, pos, tx_range_m=tx)
    a.protocol = create_protocol(protocol, level)
    for m in msgs:
        a.hold(BufferEntry(Message(m, b"12345", obj_id, 0.0), obj_id, 0.0))
    return a


def sweep(agents, clock):
    by_id = {a.obj_id: a for a in agents}
    out = []
    for a in agents:
        out += a.protocol.execute_protocol(a, agents, by_id, clock)
    clock.advance()
    return out


def ids(agent):
    return {e.message.msg_id for e in agent.buffer}


def test_levels_follow_worked_hierarchy():
    assert find_level(grp([3]), PATH_TYPES) == 0
    assert find_level(grp([2, 3]), PATH_TYPES) == 1
    assert find_level(grp([1, 2, 3]), PATH_TYPES) == 2


def test_aliases():
    assert resolve_protocol("SuperiorPeerHandoff") == "SuperiorPeer"
    assert create_protocol("Depot").sends is False


def test_epidemic_union_in_one_tick():
    a, b = make("A1", msgs=["m1"]), make("B1", msgs=["m2"])
    sweep([a, b], Clock(1 / 3600))
    assert ids(a) == ids(b) == {"m1", "m2"}


def test_three_agent_convergence_within_two_ticks():
    agents = [make("A1", msgs=["m1"]), make("B1", msgs=["m2"]), make("C1", msgs=["m3"])]
    clock = Clock(1 / 3600)
    for _ in range(2):
        sweep(agents, clock)
    assert all(ids(a) == {"m1", "m2", "m3"} for a in agents)
    assert all(len(a.buffer) == 3 for a in agents)


def test_superior_only_and_peer():
    clock = Clock(1 / 3600)
    a, b = make("B1", "SuperiorOnly", 1, msgs=["m1"]), make("B2", "SuperiorOnly", 1)
    assert sweep([a, b], clock) == []
    a, b = make("B1", "SuperiorPeer", 1, msgs=["m1"]), make("B2", "SuperiorPeer", 1)
    assert len(sweep([a, b], clock)) == 1
    a, p = make("B1", "SuperiorPeer", 1, msgs=["m1"]), make("P1", "SuperiorPeer", 2)
    assert sweep([a, p], clock) == []
    a, c = make("B1", "SuperiorOnly", 1, msgs=["m1"]), make("C1", "SuperiorOnly", 0)
    assert [t.receiver for t in sweep([a, c], clock)] == ["C1"]


def test_depot_receives_but_never_sends():
    s, d = make("S1", msgs=["m1"]), make("D1", "Depot", 0)
    log = sweep([s, d], Clock(1 / 3600))
    assert ids(d) == {"m1"}
    assert all(t.sender != "D1" for t in log)
    other = make("X1")
    sweep([d, other], Clock(1 / 3600))
    assert ids(other) == set()


def test_range_is_inclusive():
    far = (HERE[0] + 0.0009, HERE[1])
    d_m = geodesic_distance(HERE, far) * 1000
    a, b = make("A1", tx=d_m, msgs=["m1"]), make("B1", tx=d_m, pos=far)
    sweep([a, b], Clock(1 / 3600))
    assert ids(b) == {"m1"}
    c, e = make("A1", tx=d_m - 0.01, msgs=["m1"]), make("B1", tx=d_m, pos=far)
    sweep([c, e], Clock(1 / 3600))
    assert ids(e) == set()


def test_contact_record_over_scripted_crossing():
    clock = Clock(1 / 3600)
    a, b = make("A1", tx=50), make("B1", tx=50, pos=(HERE[0] + 0.01, HERE[1]))
    path = [(HERE[0] + 0.01, HERE[1]), (HERE[0] + 0.0001, HERE[1]),
            (HERE[0] + 0.0002, HERE[1]), (HERE[0] + 0.01, HERE[1])]
    for p in path:
        b.curr_geo_pos = p
        sweep([a, b], clock)
    assert len(a.protocol.contact_log) == 1
    rec = a.protocol.contact_log[0]
    assert (rec.neighbor, rec.ts_entry, rec.ts_exit) == ("B1", "00:00:01", "00:00:03")
    assert b.protocol.contact_log[0][1:] == rec[1:]


def test_open_contacts_closed_at_end():
    clock = Clock(1 / 3600)
    a, b = make("A1"), make("B1")
    sweep([a, b], clock)
    sweep([a, b], clock)
    a.protocol.close_contacts(clock)
    assert a.protocol.contact_log[0].ts_exit == "00:00:02"
    assert a.protocol.neighbor_table == {}


def test_no_duplicates_on_repeat_contact():
    a, b = make("A1", msgs=["m1", "m2"]), make("B1", msgs=["m2"])
    clock = Clock(1 / 3600)
    for _ in range(3):
        sweep([a, b], clock)
    assert [e.message.msg_id for e in b.buffer] == ["m2", "m1"]
    with pytest.raises(KeyError):
        resolve_protocol("Flood")
