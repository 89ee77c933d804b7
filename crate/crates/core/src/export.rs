//! CSV output: header row, dot decimal separator, 17 significant digits.

use std::io::Write;

use crate::asymptotics::{GapSetReport, SweepTable};
use crate::necklace::Necklace;
use crate::point::Point2;
use crate::scalar::Scalar;

pub type CsvResult = std::result::Result<(), csv::Error>;

/// Lossless scientific notation.
pub fn fmt<T: Scalar>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

pub fn write_necklace<T: Scalar, W: Write>(w: W, n: &Necklace<T>) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["center_x", "center_y", "lambda", "contact_param"])?;
    for b in &n.beads {
        out.write_record([fmt(b.center.x), fmt(b.center.y), fmt(b.lambda), fmt(b.contact_param)])?;
    }
    out.flush()?;
    Ok(())
}

/// `lambda,count,product,residual`; the residual is empty without a
/// reference perimeter and failed rows have an empty count.
pub fn write_sweep<T: Scalar, W: Write>(w: W, t: &SweepTable<T>) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["lambda", "count", "product", "residual"])?;
    for r in &t.rows {
        let (count, product) =
            if r.error.is_none() { (r.count.to_string(), fmt(r.product)) } else { (String::new(), String::new()) };
        out.write_record([fmt(r.lambda), count, product, r.residual.map(fmt).unwrap_or_default()])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_gap_set<T: Scalar, W: Write>(w: W, g: &GapSetReport<T>) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["k", "lambda_lo", "lambda_hi", "complete_found"])?;
    for iv in &g.intervals {
        out.write_record([iv.k.to_string(), fmt(iv.lambda_lo), fmt(iv.lambda_hi), iv.complete_found.to_string()])?;
    }
    out.flush()?;
    Ok(())
}

/// `x,y` rows of one polyline.
pub fn write_points<T: Scalar, W: Write>(w: W, pts: &[Point2<T>]) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["x", "y"])?;
    for p in pts {
        out.write_record([fmt(p.x), fmt(p.y)])?;
    }
    out.flush()?;
    Ok(())
}

/// `component,x,y` rows of several polylines.
pub fn write_polylines<T: Scalar, W: Write>(w: W, lines: &[Vec<Point2<T>>]) -> CsvResult {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["component", "x", "y"])?;
    for (i, line) in lines.iter().enumerate() {
        for p in line {
            out.write_record([i.to_string(), fmt(p.x), fmt(p.y)])?;
        }
    }
    out.flush()?;
    Ok(())
}
