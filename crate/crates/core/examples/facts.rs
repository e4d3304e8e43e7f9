//! Query the dimension-bound table.

use planelab::facts::{lookup, rows, FixedConfiguration, GroupClass};

fn main() {
    println!("{}", lookup(FixedConfiguration::Flag, GroupClass::Arbitrary).unwrap());
    for row in rows().iter().filter(|r| r.group_class == GroupClass::Semisimple) {
        println!("{row}");
    }
}
