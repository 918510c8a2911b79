#include "tbfact/text.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <unordered_set>

namespace tbfact::text {

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c >= 0x80;
}

// Fixed constant behind the lexical oracle: tokens that never count as
// content. Function words plus common clinical linking verbs; changing this
// list changes oracle labels, so it lives here and nowhere else.
const std::unordered_set<std::string>& stop_word_set() {
  static const std::unordered_set<std::string> kStopWords = {
      // function words
      "a", "an", "the", "and", "or", "but", "nor", "yet", "so",
      "of", "to", "in", "on", "at", "for", "with", "by", "from", "as",
      "is", "are", "was", "were", "be", "been", "being", "am",
      "has", "have", "had", "do", "does", "did",
      "this", "that", "these", "those", "it", "its", "they", "them",
      "he", "she", "his", "her", "we", "us", "you", "i",
      "not", "no", "also", "then", "than",
      "during", "after", "before", "into", "onto", "over", "under",
      "between", "within", "without", "per", "vs",
      // linking verbs that carry no clinical content of their own
      "caused", "causing", "causes",
      "showed", "showing", "shows", "shown",
      "reported", "reporting", "reports",
      "noted", "noting", "notes",
      "identified", "identifies",
      "received", "receives", "receiving",
      "underwent", "undergoes",
      "revealed", "reveals",
      "demonstrated", "demonstrates",
      "found", "finds",
      "performed", "performs",
      "given", "gives",
      "started", "starts",
      "stated", "states",
      "presented", "presents",
      "experienced", "experiences",
      "confirmed", "confirms",
      "considered", "considers",
      // ubiquitous in every clinical note; useless for support decisions
      "patient", "patients",
  };
  return kStopWords;
}

}  // namespace

std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (unsigned char c : s) {
    if (is_word_byte(c)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(c)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

std::vector<std::string> tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string norm = normalize(s);
  std::size_t i = 0;
  while (i < norm.size()) {
    std::size_t j = norm.find(' ', i);
    if (j == std::string::npos) j = norm.size();
    if (j > i) out.emplace_back(norm.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

bool is_stop_word(std::string_view token) {
  return stop_word_set().count(std::string(token)) > 0;
}

std::vector<std::string> content_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (auto& t : tokens(s)) {
    if (is_stop_word(t)) continue;
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

bool contains_phrase(std::string_view haystack, std::string_view needle) {
  std::string n = normalize(needle);
  if (n.empty()) return false;
  std::string h = " " + normalize(haystack) + " ";
  return h.find(" " + n + " ") != std::string::npos;
}

std::string DateToken::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

namespace {

const std::regex& date_regex() {
  // YYYY-MM-DD | M/D/YYYY
  static const std::regex kDate(
      R"((\d{4})-(\d{1,2})-(\d{1,2})|(\d{1,2})/(\d{1,2})/(\d{4}))");
  return kDate;
}

std::optional<DateToken> date_from_match(const std::cmatch& m, std::size_t base) {
  DateToken d;
  if (m[1].matched) {
    d.year = std::stoi(m[1]);
    d.month = std::stoi(m[2]);
    d.day = std::stoi(m[3]);
  } else {
    d.month = std::stoi(m[4]);
    d.day = std::stoi(m[5]);
    d.year = std::stoi(m[6]);
  }
  if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) return std::nullopt;
  d.raw = m[0];
  d.pos = base + static_cast<std::size_t>(m.position(0));
  return d;
}

}  // namespace

std::optional<DateToken> first_date(std::string_view s) {
  std::cmatch m;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  std::size_t base = 0;
  while (std::regex_search(begin, end, m, date_regex())) {
    if (auto d = date_from_match(m, base)) return d;
    base += static_cast<std::size_t>(m.position(0)) + m.length(0);
    begin = m[0].second;
  }
  return std::nullopt;
}

std::vector<DateToken> all_dates(std::string_view s) {
  std::vector<DateToken> out;
  std::cmatch m;
  const char* begin = s.data();
  const char* end = s.data() + s.size();
  std::size_t base = 0;
  while (std::regex_search(begin, end, m, date_regex())) {
    if (auto d = date_from_match(m, base)) out.push_back(*d);
    base += static_cast<std::size_t>(m.position(0)) + m.length(0);
    begin = m[0].second;
  }
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::size_t rough_token_count(std::string_view s) {
  std::size_t n = 0;
  bool in_tok = false;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      in_tok = false;
    } else if (!in_tok) {
      in_tok = true;
      ++n;
    }
  }
  return n;
}

namespace {

struct Line {
  std::string_view raw;  // without trailing newline
  std::size_t begin = 0;
};

std::vector<Line> split_lines(std::string_view s) {
  std::vector<Line> lines;
  std::size_t i = 0;
  while (i <= s.size()) {
    std::size_t j = s.find('\n', i);
    if (j == std::string::npos) j = s.size();
    lines.push_back({s.substr(i, j - i), i});
    if (j == s.size()) break;
    i = j + 1;
  }
  return lines;
}

bool is_heading(std::string_view trimmed) {
  if (trimmed.empty()) return false;
  if (trimmed.front() == '#') return true;
  if (trimmed.back() != ':') return false;
  if (trimmed.find(';') != std::string_view::npos) return false;
  return rough_token_count(trimmed) <= 6;
}

// Returns offset of bullet content, or npos if not a list item.
std::size_t bullet_content_offset(std::string_view trimmed) {
  if (trimmed.size() >= 2 && (trimmed[0] == '-' || trimmed[0] == '*') &&
      std::isspace(static_cast<unsigned char>(trimmed[1]))) {
    std::size_t k = 2;
    while (k < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[k]))) ++k;
    return k;
  }
  // "1. item" / "2) item"
  std::size_t k = 0;
  while (k < trimmed.size() && std::isdigit(static_cast<unsigned char>(trimmed[k]))) ++k;
  if (k > 0 && k < trimmed.size() && (trimmed[k] == '.' || trimmed[k] == ')')) {
    std::size_t m = k + 1;
    if (m < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[m]))) {
      while (m < trimmed.size() && std::isspace(static_cast<unsigned char>(trimmed[m]))) ++m;
      return m;
    }
  }
  return std::string_view::npos;
}

bool has_alpha(std::string_view s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isalpha(c) || c >= 0x80; });
}

// Sentence terminators: [.!?] followed by whitespace and an uppercase letter,
// digit, '(' or '-' (or end of text). Decimal points and a few abbreviations
// do not terminate.
bool terminates_sentence(std::string_view s, std::size_t i) {
  char c = s[i];
  if (c != '.' && c != '!' && c != '?') return false;
  if (c == '.') {
    // decimal number
    if (i > 0 && i + 1 < s.size() &&
        std::isdigit(static_cast<unsigned char>(s[i - 1])) &&
        std::isdigit(static_cast<unsigned char>(s[i + 1]))) {
      return false;
    }
    // short abbreviation list; single capitals intentionally not protected
    static const std::unordered_set<std::string> kAbbrev = {
        "e.g", "i.e", "vs", "dr", "mr", "mrs", "ms", "etc"};
    std::size_t w = i;
    while (w > 0 && (std::isalnum(static_cast<unsigned char>(s[w - 1])) || s[w - 1] == '.')) --w;
    std::string word(s.substr(w, i - w));
    std::transform(word.begin(), word.end(), word.begin(), ::tolower);
    if (kAbbrev.count(word)) return false;
  }
  std::size_t j = i + 1;
  while (j < s.size() && (s[j] == '.' || s[j] == '!' || s[j] == '?')) ++j;
  if (j >= s.size()) return true;
  if (!std::isspace(static_cast<unsigned char>(s[j]))) return false;
  while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
  if (j >= s.size()) return true;
  unsigned char nxt = static_cast<unsigned char>(s[j]);
  return std::isupper(nxt) || std::isdigit(nxt) || nxt == '(' || nxt == '-' || nxt >= 0x80;
}

struct Segmenter {
  std::string_view doc;
  std::vector<ClaimCandidate> out;

  std::string heading_text;     // nearest enclosing heading
  std::optional<DateToken> heading_date;

  // paragraph accumulator: joined text + per-char source offsets
  std::string para;
  std::vector<std::size_t> para_off;

  void set_heading(std::string_view h) {
    heading_text = std::string(h);
    heading_date = first_date(h);
  }

  void emit(std::string_view piece, std::size_t begin, std::size_t end,
            const std::optional<DateToken>& line_date) {
    std::string t = trim(piece);
    if (t.empty() || !has_alpha(t)) return;
    ClaimCandidate c;
    c.begin = begin;
    c.end = end;
    if (!first_date(t).has_value()) {
      const std::optional<DateToken>& ctx = line_date.has_value() ? line_date : heading_date;
      if (ctx.has_value()) {
        c.text = ctx->raw + ": " + t;
        c.date_injected = true;
        out.push_back(std::move(c));
        return;
      }
    }
    c.text = std::move(t);
    out.push_back(std::move(c));
  }

  void flush_paragraph() {
    if (para.empty()) return;
    std::size_t start = 0;
    for (std::size_t i = 0; i < para.size(); ++i) {
      if (terminates_sentence(para, i)) {
        std::size_t stop = i;
        while (stop + 1 < para.size() &&
               (para[stop + 1] == '.' || para[stop + 1] == '!' || para[stop + 1] == '?')) {
          ++stop;
        }
        emit_sentence(start, stop + 1);
        start = stop + 1;
        while (start < para.size() && std::isspace(static_cast<unsigned char>(para[start]))) ++start;
        i = start == 0 ? 0 : start - 1;
      }
    }
    if (start < para.size()) emit_sentence(start, para.size());
    para.clear();
    para_off.clear();
  }

  void emit_sentence(std::size_t from, std::size_t to) {
    while (from < to && std::isspace(static_cast<unsigned char>(para[from]))) ++from;
    if (from >= to) return;
    emit(std::string_view(para).substr(from, to - from), para_off[from],
         para_off[to - 1] + 1, std::nullopt);
  }

  void append_to_paragraph(std::string_view line, std::size_t base) {
    std::string t = trim(line);
    if (t.empty()) return;
    std::size_t lead = line.find_first_not_of(" \t\r");
    if (!para.empty()) {
      para.push_back(' ');
      para_off.push_back(base + lead);  // synthetic space maps to line start
    }
    for (std::size_t k = 0; k < t.size(); ++k) {
      para.push_back(t[k]);
      para_off.push_back(base + lead + k);
    }
  }

  // key:value list line: ">=2 ':' and >=1 ';'"; strips a digit-free label
  // and splits on ';' when every segment keeps a ':'.
  bool try_kv_line(std::string_view content, std::size_t base) {
    if (std::count(content.begin(), content.end(), ':') < 2) return false;
    if (content.find(';') == std::string_view::npos) return false;

    std::string_view rest = content;
    std::size_t rest_base = base;
    std::optional<DateToken> line_date = first_date(content);

    std::size_t colon = content.find(':');
    std::string_view label = content.substr(0, colon);
    bool label_has_digit = std::any_of(label.begin(), label.end(), [](unsigned char c) {
      return std::isdigit(c);
    });
    if (!label_has_digit && rough_token_count(label) <= 5) {
      rest = content.substr(colon + 1);
      rest_base = base + colon + 1;
      if (auto d = first_date(label)) line_date = d;
    }

    // every ';'-segment must keep a ':' to qualify as a kv list
    std::vector<std::pair<std::size_t, std::size_t>> segs;
    std::size_t i = 0;
    while (i <= rest.size()) {
      std::size_t j = rest.find(';', i);
      if (j == std::string_view::npos) j = rest.size();
      segs.emplace_back(i, j);
      if (j == rest.size()) break;
      i = j + 1;
    }
    if (segs.size() < 2) return false;
    for (auto [b, e] : segs) {
      if (rest.substr(b, e - b).find(':') == std::string_view::npos) return false;
    }
    for (auto [b, e] : segs) {
      emit(rest.substr(b, e - b), rest_base + b, rest_base + e, line_date);
    }
    return true;
  }

  void run() {
    for (const Line& line : split_lines(doc)) {
      std::string trimmed = trim(line.raw);
      if (trimmed.empty()) {
        flush_paragraph();
        continue;
      }
      if (is_heading(trimmed)) {
        flush_paragraph();
        set_heading(trimmed);
        continue;
      }
      std::size_t lead = line.raw.find_first_not_of(" \t\r");
      std::size_t bo = bullet_content_offset(trimmed);
      if (bo != std::string_view::npos) {
        flush_paragraph();
        std::string_view content = std::string_view(line.raw).substr(lead + bo);
        std::size_t base = line.begin + lead + bo;
        if (!try_kv_line(content, base)) {
          emit(content, base, base + content.size(), std::nullopt);
        }
        continue;
      }
      std::string_view content = std::string_view(line.raw).substr(lead);
      if (try_kv_line(content, line.begin + lead)) {
        flush_paragraph();
        continue;
      }
      append_to_paragraph(line.raw, line.begin);
    }
    flush_paragraph();
  }
};

}  // namespace

std::vector<ClaimCandidate> claim_candidates(std::string_view summary) {
  Segmenter seg;
  seg.doc = summary;
  seg.run();
  return seg.out;
}

}  // namespace tbfact::text
