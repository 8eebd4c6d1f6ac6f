//! Two small reference systems used throughout the tests and the CLI.
//!
//! `fig1` has no silent steps: `x0` branches on `a` before choosing between
//! `b` and `c`, while `y0` makes that choice after its `a`. `fig2` adds a
//! silent step: `x0` can silently commit to `b`, which `y0` cannot mimic.

use crate::aut::parse_aut;
use crate::lts::Lts;

pub const FIG1_AUT: &str = "\
des (0,7,9)
#name 0 x0
#name 1 x1
#name 2 x2
#name 3 x3
#name 4 x4
#name 5 y0
#name 6 y1
#name 7 y2
#name 8 y3
(0,\"a\",1)
(0,\"a\",2)
(1,\"b\",3)
(2,\"c\",4)
(5,\"a\",6)
(6,\"b\",7)
(6,\"c\",8)
";

pub const FIG2_AUT: &str = "\
des (0,5,7)
#name 0 x0
#name 1 x1
#name 2 x2
#name 3 x3
#name 4 y0
#name 5 y1
#name 6 y2
(0,\"a\",1)
(0,\"tau\",2)
(2,\"b\",3)
(4,\"a\",5)
(4,\"b\",6)
";

pub fn fig1() -> Lts {
    parse_aut(FIG1_AUT).expect("fig1 fixture parses")
}

pub fn fig2() -> Lts {
    parse_aut(FIG2_AUT).expect("fig2 fixture parses")
}

/// Looks a fixture up by name (`fig1` or `fig2`).
pub fn by_name(name: &str) -> Option<Lts> {
    match name {
        "fig1" => Some(fig1()),
        "fig2" => Some(fig2()),
        _ => None,
    }
}
