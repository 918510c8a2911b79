#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tbfact::text {

// Lowercases, maps every non-alphanumeric byte to a space, collapses runs of
// spaces and trims. Bytes >= 0x80 pass through so UTF-8 content survives.
std::string normalize(std::string_view s);

// Tokens of normalize(s), in order, duplicates kept.
std::vector<std::string> tokens(std::string_view s);

// True for tokens that never count toward lexical overlap. The list is the
// single fixed constant behind the oracle thresholds; see text.cpp.
bool is_stop_word(std::string_view token);

// Unique non-stop-word tokens of s, in first-occurrence order.
std::vector<std::string> content_tokens(std::string_view s);

// Token-boundary containment of normalize(needle) inside normalize(haystack).
// Empty needle never matches.
bool contains_phrase(std::string_view haystack, std::string_view needle);

struct DateToken {
  int year = 0;
  int month = 0;
  int day = 0;
  std::string raw;      // as written in the input
  std::size_t pos = 0;  // byte offset in the input

  // Sort key for timeline ordering.
  long ordinal() const { return year * 10000L + month * 100L + day; }
  std::string iso() const;
};

// Recognizes YYYY-MM-DD and M/D/YYYY forms with plausible month/day ranges.
std::optional<DateToken> first_date(std::string_view s);
std::vector<DateToken> all_dates(std::string_view s);

// One unit the deterministic extractor proposes as a claim: a sentence, a
// list item, or a key:value segment. The span covers the underlying source
// characters; text may carry a date prefix injected from an enclosing heading.
struct ClaimCandidate {
  std::string text;
  std::size_t begin = 0;
  std::size_t end = 0;
  bool date_injected = false;
};

// Deterministic segmentation used by the lexical oracle backend.
// Rules:
//   - lines ending in ':' with at most 6 tokens (or starting with '#') are
//     headings, never claims; a heading's first date becomes context for the
//     sentences under it
//   - bullet/numbered list items are one candidate each
//   - a line with >= 2 ':' and >= 1 ';' is a key:value list: an initial
//     digit-free label is dropped as an inline heading and the remainder is
//     split on ';' when every segment keeps a ':'
//   - consecutive plain lines form paragraphs, split into sentences on
//     terminal punctuation (decimal points and a few abbreviations excepted)
//   - a candidate with no date of its own inherits the enclosing heading's
//     date, prepended as "<date>: "
std::vector<ClaimCandidate> claim_candidates(std::string_view summary);

// Whitespace-delimited token count, used for chunk budgeting.
std::size_t rough_token_count(std::string_view s);

std::string trim(std::string_view s);

}  // namespace tbfact::text
