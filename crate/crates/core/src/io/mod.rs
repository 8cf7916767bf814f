//! Text formats: field files, CSV tables and JSON mirrors.

mod field_file;
mod tables;

pub use field_file::{parse_field, read_field, render_field, write_field, FieldFile};
pub use tables::{
    minimizer_csv, scan_csv, sharp_summary_csv, sweep_csv, crack_table_csv, graph_csv,
    write_json, write_text,
};

/// Formats `x` with 12 significant digits, `%.12g` style.
///
/// Fixed notation is used for decimal exponents in `[-5, 12)`, scientific
/// otherwise; trailing zeros are dropped.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 12;
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..DIGITS).contains(&exp) {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Shortest decimal that parses back to the same `f64`; used in file names.
pub fn format_exact(x: f64) -> String {
    format!("{x}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn twelve_digit_formatting() {
        assert_eq!(format_sig(0.0), "0");
        assert_eq!(format_sig(1.0), "1");
        assert_eq!(format_sig(-2.5), "-2.5");
        assert_eq!(format_sig(4.0 * 2f64.sqrt() / 15.0), "0.377123616633");
        assert_eq!(format_sig(2.029333333333333), "2.02933333333");
        assert_eq!(format_sig(1e-7), "1e-7");
        assert_eq!(format_sig(1.234e-5), "0.00001234");
        assert_eq!(format_sig(123456789012345.0), "1.23456789012e14");
        assert_eq!(format_sig(200.0), "200");
        assert_eq!(format_sig(f64::INFINITY), "inf");
    }

    proptest! {
        #[test]
        fn twelve_digits_survive_reparse(x in -1e6f64..1e6) {
            let back: f64 = format_sig(x).parse().unwrap();
            prop_assert!((back - x).abs() <= 1e-11 * x.abs().max(1e-300));
        }

        #[test]
        fn exact_format_round_trips(x in proptest::num::f64::NORMAL) {
            prop_assert_eq!(format_exact(x).parse::<f64>().unwrap(), x);
        }
    }
}
