use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 48.0;

/// A single polyline with the data ranges printed at the axis ends.
pub fn polyline(points: &[(f64, f64)], x_label: &str, y_label: &str) -> String {
    let finite: Vec<(f64, f64)> = points.iter().copied().filter(|(x, y)| x.is_finite() && y.is_finite()).collect();
    let range = |f: fn(&(f64, f64)) -> f64| {
        let lo = finite.iter().map(f).fold(f64::INFINITY, f64::min);
        let hi = finite.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, lo + 0.5)
        }
    };
    let (x0, x1) = range(|p| p.0);
    let (y0, y1) = range(|p| p.1);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);
    let path: Vec<String> = finite.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let (l, r, t, b) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    let _ = writeln!(out, r#"<polyline fill="none" stroke="black" points="{l},{t} {l},{b} {r},{b}"/>"#);
    let _ = writeln!(out, r#"<polyline fill="none" stroke="blue" points="{}"/>"#, path.join(" "));
    let _ = writeln!(out, r#"<text x="{l}" y="{}" font-size="11">{x0:.4e}</text>"#, b + 16.0);
    let _ = writeln!(out, r#"<text x="{r}" y="{}" font-size="11" text-anchor="end">{x1:.4e}</text>"#, b + 16.0);
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{x_label}</text>"#, WIDTH / 2.0, b + 32.0);
    let _ = writeln!(out, r#"<text x="4" y="{b}" font-size="11">{y0:.3e}</text>"#);
    let _ = writeln!(out, r#"<text x="4" y="{}" font-size="11">{y1:.3e}</text>"#, t - 6.0);
    let _ = writeln!(out, r#"<text x="{l}" y="16" font-size="11">{y_label}</text>"#);
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_hit_the_frame() {
        let s = polyline(&[(0.0, 0.0), (1.0, 2.0)], "x", "y");
        assert!(s.contains(&format!("{:.2},{:.2} {:.2},{:.2}", MARGIN, HEIGHT - MARGIN, WIDTH - MARGIN, MARGIN)));
        assert!(s.ends_with("</svg>\n"));
    }
}
