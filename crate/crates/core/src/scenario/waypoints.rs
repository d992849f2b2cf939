//! BonnMotion-style movement files: one line per node, each line a flat
//! sequence of `t x y z` quadruples with ascending times. Node ids are
//! positional, starting at 1.

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::placement::NodeId;
use crate::trajectory::{Trajectory, Waypoint};

pub fn parse_waypoints(text: &str) -> Result<Vec<Trajectory>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let values = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|e| Error::Parse {
                    line: lineno,
                    message: format!("bad number {tok:?}: {e}"),
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() % 4 != 0 {
            return Err(Error::Parse {
                line: lineno,
                message: format!(
                    "{} values do not form (t x y z) quadruples",
                    values.len()
                ),
            });
        }
        let samples = values
            .chunks_exact(4)
            .map(|q| Waypoint {
                t: q[0],
                position: Point3::new(q[1], q[2], q[3]),
            })
            .collect();
        let node = NodeId(out.len() as u32 + 1);
        let tr = Trajectory::new(node, samples).map_err(|e| match e {
            Error::Invalid(m) => Error::Invalid(format!("line {lineno}: {m}")),
            other => other,
        })?;
        out.push(tr);
    }
    Ok(out)
}

pub fn load_waypoints(path: impl AsRef<Path>) -> Result<Vec<Trajectory>> {
    parse_waypoints(&std::fs::read_to_string(path)?)
}

/// Writes with six fractional digits.
pub fn write_waypoints(trajectories: &[Trajectory], mut w: impl Write) -> Result<()> {
    for tr in trajectories {
        let line = tr
            .samples()
            .iter()
            .map(|s| {
                format!(
                    "{:.6} {:.6} {:.6} {:.6}",
                    s.t, s.position.x, s.position.y, s.position.z
                )
            })
            .collect::<Vec<_>>()
            .join(" ");
        writeln!(w, "{line}")?;
    }
    Ok(())
}

pub fn save_waypoints(trajectories: &[Trajectory], path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_waypoints(trajectories, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_two_quadruples() {
        let trs = parse_waypoints("0 10 10 10 5 20 10 10\n").unwrap();
        assert_eq!(trs.len(), 1);
        let s = trs[0].samples();
        assert_eq!((s[0].t, s[0].position), (0.0, Point3::new(10.0, 10.0, 10.0)));
        assert_eq!((s[1].t, s[1].position), (5.0, Point3::new(20.0, 10.0, 10.0)));
    }

    #[test]
    fn missing_coordinate_is_a_parse_error() {
        match parse_waypoints("0 1 1 1\n0 10 10 10 5 20 10\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_waypoints("0 1 x 1"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn descending_time_rejected() {
        let err = parse_waypoints("5 0 0 0 1 0 0 0\n").unwrap_err();
        assert!(matches!(err, Error::Invalid(ref m) if m.contains("line 1")), "{err}");
    }

    fn arb_trajectory() -> impl Strategy<Value = Vec<(i64, i64, i64, i64)>> {
        prop::collection::vec(
            (1i64..5_000_000, -100_000_000i64..100_000_000, -100_000_000i64..100_000_000, 0i64..50_000_000),
            1..8,
        )
    }

    proptest! {
        #[test]
        fn save_load_round_trip(raw in prop::collection::vec(arb_trajectory(), 1..4)) {
            // values with at most six fractional digits
            let trajectories: Vec<Trajectory> = raw
                .iter()
                .enumerate()
                .map(|(i, pts)| {
                    let mut t = 0i64;
                    let samples = pts
                        .iter()
                        .map(|(dt, x, y, z)| {
                            t += dt;
                            Waypoint {
                                t: t as f64 / 1e6,
                                position: Point3::new(*x as f64 / 1e6, *y as f64 / 1e6, *z as f64 / 1e6),
                            }
                        })
                        .collect();
                    Trajectory::new(NodeId(i as u32 + 1), samples).unwrap()
                })
                .collect();
            let mut buf = Vec::new();
            write_waypoints(&trajectories, &mut buf).unwrap();
            let back = parse_waypoints(std::str::from_utf8(&buf).unwrap()).unwrap();
            prop_assert_eq!(back, trajectories);
        }
    }
}
