//! Letter inventory of normalized Somali word tokens.
//!
//! Somali Latin orthography uses the lowercase ASCII letters plus the
//! apostrophe, which writes the glottal stop and only ever occurs inside a
//! word (`ba'an`, `su'aal`).

/// A character allowed anywhere in a normalized word.
pub fn is_word_char(c: char) -> bool {
    c.is_ascii_lowercase() || c == '\''
}

/// True when `s` is a non-empty run of word characters whose apostrophes are
/// all word-internal.
pub fn is_word(s: &str) -> bool {
    !s.is_empty() && s.chars().all(is_word_char) && !s.starts_with('\'') && !s.ends_with('\'')
}
