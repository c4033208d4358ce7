//! The `13a` tokenizer (mteval-v13a rules) and Python-compatible
//! whitespace handling.

use std::sync::OnceLock;

use regex::Regex;

/// Whitespace as Python's `str.split()` sees it: Unicode `White_Space`
/// plus the ASCII separators U+001C..U+001F.
pub fn is_py_space(c: char) -> bool {
    c.is_whitespace() || ('\u{1c}'..='\u{1f}').contains(&c)
}

pub fn py_split(text: &str) -> impl Iterator<Item = &str> {
    text.split(is_py_space).filter(|s| !s.is_empty())
}

struct Rules {
    symbols: Regex,
    period_comma_after: Regex,
    period_comma_before: Regex,
    dash_after_digit: Regex,
}

fn rules() -> &'static Rules {
    static RULES: OnceLock<Rules> = OnceLock::new();
    RULES.get_or_init(|| Rules {
        symbols: Regex::new(r"([\{-~\[-` -&\(-\+:-@/])").unwrap(),
        period_comma_after: Regex::new(r"([^0-9])([\.,])").unwrap(),
        period_comma_before: Regex::new(r"([\.,])([^0-9])").unwrap(),
        dash_after_digit: Regex::new(r"([0-9])(-)").unwrap(),
    })
}

pub fn tokenize_13a(line: &str) -> String {
    let mut line = line
        .replace("<skipped>", "")
        .replace("-\n", "")
        .replace('\n', " ");
    if line.contains('&') {
        line = line
            .replace("&quot;", "\"")
            .replace("&amp;", "&")
            .replace("&lt;", "<")
            .replace("&gt;", ">");
    }
    let padded = format!(" {line} ");
    let r = rules();
    let s = r.symbols.replace_all(&padded, " ${1} ");
    let s = r.period_comma_after.replace_all(&s, "${1} ${2} ");
    let s = r.period_comma_before.replace_all(&s, " ${1} ${2}");
    let s = r.dash_after_digit.replace_all(&s, "${1} ${2} ");
    py_split(&s).collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_punctuation() {
        assert_eq!(tokenize_13a("Hello, world!"), "Hello , world !");
        assert_eq!(tokenize_13a("It costs 1,250.50 rupees."), "It costs 1,250.50 rupees .");
        assert_eq!(tokenize_13a("ages 6-10"), "ages 6 - 10");
        assert_eq!(tokenize_13a("a &amp; b"), "a & b");
        assert_eq!(tokenize_13a("(and the gate)."), "( and the gate ) .");
        assert_eq!(tokenize_13a("U.S. team"), "U . S . team");
        assert_eq!(tokenize_13a("   "), "");
    }

    #[test]
    fn leaves_indic_text_alone() {
        assert_eq!(tokenize_13a("बच्चे पार्क में खेल रहे हैं।"), "बच्चे पार्क में खेल रहे हैं।");
    }

    #[test]
    fn python_whitespace() {
        assert!(is_py_space('\u{1f}'));
        assert!(is_py_space('\u{a0}'));
        assert!(!is_py_space('\u{200b}'));
        assert_eq!(py_split(" a\u{1c}b  c ").collect::<Vec<_>>(), ["a", "b", "c"]);
    }
}
