//! Locale-independent number and table formatting.

/// Positional decimal with 17 significant digits; exact zero prints as `0`.
pub fn format_value(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let exponent: i32 = sci[sci.find('e').expect("scientific notation") + 1..]
        .parse()
        .expect("integer exponent");
    let decimals = (16 - exponent).max(0) as usize;
    format!("{x:.decimals$}")
}

/// Comma-separated table with one header row and LF line endings.
pub struct Csv {
    out: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        let mut out = header.join(",");
        out.push('\n');
        Self { out }
    }

    pub fn row<I, S>(&mut self, cells: I)
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut first = true;
        for cell in cells {
            if !first {
                self.out.push(',');
            }
            self.out.push_str(cell.as_ref());
            first = false;
        }
        self.out.push('\n');
    }

    pub fn finish(self) -> String {
        self.out
    }
}
