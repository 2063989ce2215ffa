//! Small reference instances used by tests, the CLI examples and the browser demo.

use crate::instance::{parse_instance, Instance};

pub const TRIANGLE_JSON: &str = r#"{
  "name": "triangle",
  "nodes": [{"id": "a", "peak": 1}, {"id": "b", "peak": 1}, {"id": "c", "peak": 1}],
  "edges": [{"u": "a", "v": "b"}, {"u": "b", "v": "c"}, {"u": "c", "v": "a"}]
}"#;

/// Four agents, peaks 2, 5, 3, 2, five links.
pub const FOUR_AGENT_JSON: &str = r#"{
  "name": "four-agent",
  "nodes": [
    {"id": "a1", "peak": 2}, {"id": "a2", "peak": 5},
    {"id": "a3", "peak": 3}, {"id": "a4", "peak": 2}
  ],
  "edges": [
    {"u": "a1", "v": "a3"}, {"u": "a1", "v": "a4"}, {"u": "a2", "v": "a4"},
    {"u": "a2", "v": "a3"}, {"u": "a4", "v": "a3"}
  ]
}"#;

/// Fifteen agents: an odd triangle feeding an over-demanded hub, a dense perfect block, and a
/// pendant pair.
pub const FIFTEEN_AGENT_JSON: &str = r#"{
  "name": "fifteen-agent",
  "nodes": [
    {"id": "s1", "peak": 2}, {"id": "s2", "peak": 3}, {"id": "s3", "peak": 2},
    {"id": "s4", "peak": 4}, {"id": "s5", "peak": 4}, {"id": "s6", "peak": 5},
    {"id": "s7", "peak": 2}, {"id": "s8", "peak": 4}, {"id": "s9", "peak": 2},
    {"id": "s10", "peak": 2}, {"id": "s11", "peak": 2}, {"id": "s12", "peak": 2},
    {"id": "s13", "peak": 2}, {"id": "s14", "peak": 2}, {"id": "s15", "peak": 2}
  ],
  "edges": [
    {"u": "s1", "v": "s2"}, {"u": "s2", "v": "s3"}, {"u": "s3", "v": "s1"},
    {"u": "s6", "v": "s2"}, {"u": "s6", "v": "s4"}, {"u": "s6", "v": "s5"},
    {"u": "s7", "v": "s8"},
    {"u": "s9", "v": "s10"}, {"u": "s10", "v": "s11"}, {"u": "s11", "v": "s12"},
    {"u": "s12", "v": "s9"}, {"u": "s9", "v": "s11"}, {"u": "s10", "v": "s12"},
    {"u": "s13", "v": "s14"}, {"u": "s15", "v": "s14"}, {"u": "s13", "v": "s15"},
    {"u": "s13", "v": "s7"}, {"u": "s12", "v": "s6"}
  ]
}"#;

pub const PATH7_JSON: &str = r#"{
  "name": "path7",
  "nodes": [
    {"id": "s1", "peak": 1}, {"id": "s2", "peak": 1}, {"id": "s3", "peak": 1},
    {"id": "s4", "peak": 1}, {"id": "s5", "peak": 1}, {"id": "s6", "peak": 1},
    {"id": "s7", "peak": 1}
  ],
  "edges": [
    {"u": "s1", "v": "s2"}, {"u": "s2", "v": "s3"}, {"u": "s3", "v": "s4"},
    {"u": "s4", "v": "s5"}, {"u": "s5", "v": "s6"}, {"u": "s6", "v": "s7"}
  ]
}"#;

pub fn triangle() -> Instance {
    parse_instance(TRIANGLE_JSON).expect("fixture parses")
}

pub fn four_agent() -> Instance {
    parse_instance(FOUR_AGENT_JSON).expect("fixture parses")
}

pub fn fifteen_agent() -> Instance {
    parse_instance(FIFTEEN_AGENT_JSON).expect("fixture parses")
}

pub fn path7() -> Instance {
    parse_instance(PATH7_JSON).expect("fixture parses")
}

/// All bundled fixtures as `(name, json)`.
pub fn all() -> [(&'static str, &'static str); 4] {
    [
        ("triangle", TRIANGLE_JSON),
        ("four-agent", FOUR_AGENT_JSON),
        ("fifteen-agent", FIFTEEN_AGENT_JSON),
        ("path7", PATH7_JSON),
    ]
}
