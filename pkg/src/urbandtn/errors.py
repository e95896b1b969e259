"""Exception hierarchy shared by every stage of the simulator."""


class SimulationError(Exception):
    """Base class for all errors raised by urbandtn."""


# configuration ---------------------------------------------------------------

class ConfigError(SimulationError):
    pass


class MalformedSchemaLine(ConfigError):
    def __init__(self, line_no, line=""):
        self.line_no = line_no
        super().__init__(f"malformed schema line {line_no}: {line!r}")


class DuplicateParam(ConfigError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"parameter declared twice: {name}")


class UnknownKey(ConfigError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"unknown parameter: {name}")


class TypeMismatch(ConfigError):
    def __init__(self, key, raw):
        self.key = key
        self.raw = raw
        super().__init__(f"cannot parse value for {key}: {raw!r}")


class MissingRequired(ConfigError):
    def __init__(self, key):
        self.key = key
        super().__init__(f"required parameter missing: {key}")


class PathTypeUndefined(ConfigError):
    def __init__(self, group_id, value):
        self.group_id = group_id
        self.value = value
        super().__init__(f"group {group_id} uses undefined path type {value}")


# map ingestion -----------------------------------------------------------------

class MapError(SimulationError):
    pass


class XmlSyntaxError(MapError):
    def __init__(self, line, detail=""):
        self.line = line
        super().__init__(f"XML syntax error at line {line}: {detail}")


class DanglingNodeRef(MapError):
    def __init__(self, way_id, node_id):
        self.way_id = way_id
        self.node_id = node_id
        super().__init__(f"way {way_id} references missing node {node_id}")


class InvalidWay(MapError):
    def __init__(self, way_id, reason):
        self.way_id = way_id
        super().__init__(f"way {way_id}: {reason}")


# geometry / graph ----------------------------------------------------------------

class DegenerateBounds(SimulationError):
    pass


class UnknownVertex(SimulationError):
    def __init__(self, vertex):
        self.vertex = vertex
        super().__init__(f"vertex {vertex} is not in the road graph")


class NotAnEndpoint(SimulationError):
    def __init__(self, vertex, way_id):
        self.vertex = vertex
        self.way_id = way_id
        super().__init__(f"vertex {vertex} is not an endpoint of way {way_id}")


class NoFeasibleVertex(SimulationError):
    def __init__(self, allowed_types):
        self.allowed_types = allowed_types
        super().__init__(f"no vertex touches a road of type {sorted(allowed_types)}")


# events / reports / engine -----------------------------------------------------------

class NoStationaryAgents(SimulationError):
    def __init__(self):
        super().__init__("events need at least one stationary, non-depot agent")


class IoFailure(SimulationError):
    def __init__(self, path, detail=""):
        self.path = path
        super().__init__(f"I/O failure at {path}: {detail}")


class FatalInit(SimulationError):
    """Wraps any error raised while building a simulation context."""
