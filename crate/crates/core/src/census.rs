//! Small bundled triangulations used by tests, examples and the CLI.

use crate::triangulation::Triangulation;

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/", $name, ".tri")))),*]
    };
}

/// `(name, gluing table)` for each bundled triangulation, smallest first.
pub const BUNDLED: &[(&str, &str)] = bundled![
    "one_tet",
    "solid_torus_1",
    "ball_2",
    "solid_torus_2",
    "s3_two",
    "s3_one_vertex",
    "lens_3_1",
    "rp3",
    "s2xs1",
    "ball_3",
    "solid_torus_3",
    "lens_3_1_three",
    "ball_4",
    "s3_five",
];

/// All bundled triangulations, parsed.
pub fn bundled() -> Vec<(&'static str, Triangulation)> {
    BUNDLED.iter().map(|(n, text)| (*n, text.parse().expect("bundled file parses"))).collect()
}

/// One bundled triangulation by name.
pub fn get(name: &str) -> Option<Triangulation> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| text.parse().expect("bundled file parses"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate;

    #[test]
    fn all_valid_and_connected() {
        for (name, t) in bundled() {
            let r = validate(&t);
            assert!(r.is_valid() && r.connected, "{name}: {}", r.summary());
        }
    }
}
