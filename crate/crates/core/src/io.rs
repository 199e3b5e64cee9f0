//! CSV formats for curves and phase-plane trajectories.
//!
//! Curves are written as `u,x,y` rows. A row holding only `# seam` marks the
//! start of a new piece. Trajectories are written as `x,u,v,event` rows,
//! where `event` is empty for ordinary samples, `start` on the first row of
//! each trajectory and an event label on interpolated crossings.

use crate::error::{Error, Result};
use crate::geometry::curve::{Chart, DiscreteCurve};
use crate::geometry::linalg::Vec2;
use crate::phase::TrajectorySegment;
use std::io::{Read, Write};

pub const SEAM_MARKER: &str = "# seam";

fn field(v: f64) -> String {
    // shortest representation that round-trips
    format!("{v:?}")
}

pub fn write_curve_csv<W: Write>(curve: &DiscreteCurve, out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
    w.write_record(["u", "x", "y"])?;
    let mut seams = curve.seams().iter().peekable();
    for (i, (&u, p)) in curve.params().iter().zip(curve.points()).enumerate() {
        if seams.next_if_eq(&&i).is_some() {
            w.write_record([SEAM_MARKER])?;
        }
        w.write_record([field(u), field(p.x), field(p.y)])?;
    }
    w.flush()?;
    Ok(())
}

fn parse(s: &str, line: u64) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Csv(format!("line {line}: cannot parse {s:?} as a number")))
}

/// Reads a curve written by [`write_curve_csv`]. The chart is recorded as
/// parametric and no jets are attached.
pub fn read_curve_csv<R: Read>(input: R) -> Result<DiscreteCurve> {
    let mut r = csv::ReaderBuilder::new().flexible(true).from_reader(input);
    let headers = r.headers()?;
    if headers.iter().map(str::trim).ne(["u", "x", "y"]) {
        return Err(Error::Csv(format!(
            "expected header u,x,y, found {}",
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let (mut params, mut points, mut seams) = (Vec::new(), Vec::new(), Vec::new());
    for rec in r.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line());
        match rec.len() {
            1 if rec[0].trim() == SEAM_MARKER => seams.push(params.len()),
            3 => {
                params.push(parse(&rec[0], line)?);
                points.push(Vec2::new(parse(&rec[1], line)?, parse(&rec[2], line)?));
            }
            n => return Err(Error::Csv(format!("line {line}: expected 3 fields, found {n}"))),
        }
    }
    DiscreteCurve::with_seams(params, points, Chart::Parametric, seams)
}

/// Writes trajectories one after another, each with its samples and event
/// crossings merged in integration order.
pub fn write_portrait_csv<W: Write>(trajectories: &[TrajectorySegment], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "u", "v", "event"])?;
    for t in trajectories {
        let forward = t.xs.last() >= t.xs.first();
        let before = |a: f64, b: f64| if forward { a < b } else { a > b };
        let mut events = t.events.iter().peekable();
        for (i, (&x, s)) in t.xs.iter().zip(&t.states).enumerate() {
            while let Some(h) = events.next_if(|h| before(h.x, x)) {
                w.write_record([
                    field(h.x),
                    field(h.state[0]),
                    field(h.state[1]),
                    h.event.label().to_string(),
                ])?;
            }
            let tag = if i == 0 { "start" } else { "" };
            w.write_record([field(x), field(s[0]), field(s[1]), tag.to_string()])?;
        }
        for h in events {
            w.write_record([
                field(h.x),
                field(h.state[0]),
                field(h.state[1]),
                h.event.label().to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::{integrate, Event, PhaseSystem, StopRules};

    fn curve(seams: Vec<usize>) -> DiscreteCurve {
        let params: Vec<f64> = (0..10).map(|i| 0.1 * i as f64 - 1.0 / 3.0).collect();
        let points = params.iter().map(|&u| Vec2::new(u.sin(), u * u * 1e-17)).collect();
        DiscreteCurve::with_seams(params, points, Chart::Parametric, seams).unwrap()
    }

    #[test]
    fn curve_round_trip_is_exact() {
        for seams in [vec![], vec![5]] {
            let c = curve(seams);
            let mut buf = Vec::new();
            write_curve_csv(&c, &mut buf).unwrap();
            let back = read_curve_csv(buf.as_slice()).unwrap();
            assert_eq!(back.params(), c.params());
            assert_eq!(back.points(), c.points());
            assert_eq!(back.seams(), c.seams());
        }
    }

    #[test]
    fn seam_marker_is_written() {
        let mut buf = Vec::new();
        write_curve_csv(&curve(vec![5]), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("u,x,y\n"));
        assert_eq!(text.lines().nth(6), Some(SEAM_MARKER));
    }

    #[test]
    fn malformed_input() {
        assert!(matches!(
            read_curve_csv("a,b,c\n1,2,3\n".as_bytes()),
            Err(Error::Csv(_))
        ));
        assert!(matches!(read_curve_csv("u,x,y\n1,2\n".as_bytes()), Err(Error::Csv(_))));
        assert!(matches!(
            read_curve_csv("u,x,y\n1,2,z\n".as_bytes()),
            Err(Error::Csv(_))
        ));
    }

    #[test]
    fn portrait_rows_are_ordered() {
        let rules = StopRules {
            max_span: 10.0,
            ..Default::default()
        };
        let t = integrate(PhaseSystem::Deg1e, [1.0, 0.0], 0.0, 1.0, &rules, &Event::ALL).unwrap();
        assert!(!t.events.is_empty());
        let mut buf = Vec::new();
        write_portrait_csv(&[t.clone(), t.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let rows: Vec<&str> = text.lines().skip(1).collect();
        assert_eq!(rows.len(), 2 * (t.xs.len() + t.events.len()));
        assert_eq!(rows.iter().filter(|r| r.ends_with(",start")).count(), 2);
        let xs: Vec<f64> = rows[..rows.len() / 2]
            .iter()
            .map(|r| r.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert!(xs.windows(2).all(|w| w[0] <= w[1]));
    }
}
