#include "sir/parser.hpp"

#include <algorithm>

#include "sir/error.hpp"

namespace sir {

namespace {

constexpr std::size_t kMaxColumnTokens = 8;

using Kind = LexItem::Kind;

std::vector<std::string> column_key_variants(const std::string& key, bool singularize) {
  std::vector<std::string> out{key};
  if (!singularize || key.size() < 2) return out;
  auto ends = [&](std::string_view suffix) { return key.size() > suffix.size() && key.ends_with(suffix); };
  if (ends("ies")) out.push_back(key.substr(0, key.size() - 3) + "y");
  if (ends("es")) out.push_back(key.substr(0, key.size() - 2));
  if (ends("s")) out.push_back(key.substr(0, key.size() - 1));
  if (ends("y")) out.push_back(key.substr(0, key.size() - 1) + "ies");
  out.push_back(key + "s");
  out.push_back(key + "es");
  return out;
}

std::optional<ColumnIndex> lookup_column(const TableDocument& table, const std::string& key, bool singularize) {
  for (const auto& variant : column_key_variants(key, singularize)) {
    if (auto c = table.find_column(variant)) return c;
  }
  return std::nullopt;
}

std::string joined_key(const std::vector<Token>& tokens, std::size_t begin, std::size_t end) {
  std::string concat;
  for (std::size_t i = begin; i < end; ++i) concat += tokens[i].text;
  return normalize_key(concat);
}

bool holds_column(const LexItem& item, ColumnIndex column) {
  return std::any_of(item.hits.begin(), item.hits.end(), [&](const ColumnHit& h) { return h.column == column; });
}

struct Criterion {
  std::size_t first_item = 0;
  std::size_t last_item = 0;
  Predicate predicate;
  int negations = 0;
};

class Assembler {
 public:
  Assembler(const ParseState& state, const TableDocument& table, const Lexicon& lexicon)
      : state_(state), items_(state.items), table_(table), lexicon_(lexicon), consumed_(items_.size(), false) {}

  ParseOutcome run();

 private:
  TokenDiagnostic diag(std::size_t item) const {
    const auto& it = items_[item];
    const auto& toks = state_.tokens;
    TokenDiagnostic d;
    d.begin = toks[it.first_token].begin;
    d.end = toks[it.end_token - 1].end;
    d.token = state_.utterance.substr(d.begin, d.end - d.begin);
    return d;
  }

  const std::string& first_text(std::size_t item) const { return state_.tokens[items_[item].first_token].text; }

  bool is_cue(std::size_t i, CueRole role) const { return items_[i].kind == Kind::Cue && items_[i].role == role; }

  // Neighbouring item, skipping plain stopwords.
  std::optional<std::size_t> next_content(std::size_t i) const {
    for (std::size_t j = i + 1; j < items_.size(); ++j) {
      if (items_[j].kind != Kind::Stop) return j;
    }
    return std::nullopt;
  }
  std::optional<std::size_t> prev_content(std::size_t i) const {
    for (std::size_t j = i; j-- > 0;) {
      if (items_[j].kind != Kind::Stop) return j;
    }
    return std::nullopt;
  }

  // Value item next to column item `c` in direction `step` that `c` can bind.
  // Stopwords are skipped unless they double as a value of that column.
  std::optional<std::size_t> adjacent_value(std::size_t c, int step) const {
    const auto column = items_[c].column;
    for (auto j = static_cast<std::ptrdiff_t>(c) + step; j >= 0 && j < static_cast<std::ptrdiff_t>(items_.size());
         j += step) {
      const auto& it = items_[static_cast<std::size_t>(j)];
      if (consumed_[static_cast<std::size_t>(j)]) return std::nullopt;
      if (it.kind == Kind::Stop) {
        if (it.value_alternative && holds_column(it, column)) return static_cast<std::size_t>(j);
        continue;
      }
      if (it.kind != Kind::Value) return std::nullopt;
      const bool literal = it.quoted && table_.column(column).kind == ColumnKind::Textual;
      if (holds_column(it, column) || literal) return static_cast<std::size_t>(j);
      return std::nullopt;
    }
    return std::nullopt;
  }

  void add_criterion(std::size_t a, std::size_t b, Predicate p) {
    criteria_.push_back({std::min(a, b), std::max(a, b), std::move(p), 0});
  }

  void fail(std::string reason, std::optional<std::size_t> item = std::nullopt) {
    if (failure_.empty()) failure_ = std::move(reason);
    if (item) unmatched_.push_back(diag(*item));
  }

  void find_group_columns();
  void bind_numbers();
  void bind_column_values();
  std::optional<NeedsClarification> bind_bare_values();
  Predicate build_predicate();

  const ParseState& state_;
  const std::vector<LexItem>& items_;
  const TableDocument& table_;
  const Lexicon& lexicon_;

  std::vector<bool> consumed_;
  std::vector<Criterion> criteria_;
  std::vector<ColumnIndex> group_columns_;
  std::vector<TokenDiagnostic> ignored_;
  std::vector<TokenDiagnostic> unmatched_;
  std::string failure_;
};

void Assembler::find_group_columns() {
  for (std::size_t g = 0; g < items_.size(); ++g) {
    if (!is_cue(g, CueRole::Group) || consumed_[g]) continue;
    consumed_[g] = true;
    std::size_t j = g + 1;
    if (lexicon_.strip_of_the) {
      while (j < items_.size() && items_[j].kind == Kind::Stop && (first_text(j) == "of" || first_text(j) == "the")) ++j;
    }
    if (j >= items_.size() || items_[j].kind != Kind::Column || consumed_[j]) {
      ignored_.push_back(diag(g));
      continue;
    }
    auto take = [&](std::size_t item) {
      consumed_[item] = true;
      const auto col = items_[item].column;
      if (std::find(group_columns_.begin(), group_columns_.end(), col) == group_columns_.end()) {
        group_columns_.push_back(col);
      }
    };
    take(j);
    // "by difficulty and terrain": further columns joined by "and".
    for (std::size_t k = j + 1; k + 1 < items_.size(); k += 2) {
      if (!is_cue(k, CueRole::And) || consumed_[k]) break;
      const auto c = k + 1;
      if (items_[c].kind != Kind::Column || consumed_[c]) break;
      if (adjacent_value(c, +1)) break;
      consumed_[k] = true;
      take(c);
    }
  }
}

void Assembler::bind_numbers() {
  for (std::size_t k = 0; k < items_.size(); ++k) {
    if (items_[k].kind != Kind::Number || consumed_[k]) continue;
    consumed_[k] = true;

    std::optional<CompareOp> op;
    std::optional<std::size_t> pre_cue;
    std::optional<std::size_t> post_cue;
    const auto p = prev_content(k);
    const auto n = next_content(k);
    if (p && is_cue(*p, CueRole::Comparator) && !consumed_[*p]) {
      op = items_[*p].op;
      pre_cue = p;
    } else if (n && is_cue(*n, CueRole::Comparator) && !consumed_[*n]) {
      op = items_[*n].op;
      post_cue = n;
    }

    auto numeric_column_at = [&](std::optional<std::size_t> i) -> std::optional<std::size_t> {
      if (!i || consumed_[*i] || items_[*i].kind != Kind::Column) return std::nullopt;
      if (table_.column(items_[*i].column).kind != ColumnKind::Numeric) return std::nullopt;
      return i;
    };
    auto col = numeric_column_at(next_content(post_cue.value_or(k)));
    if (!col) col = numeric_column_at(prev_content(pre_cue.value_or(k)));

    if (!col) {
      fail("the number '" + first_text(k) + "' must be next to the name of a numeric column", k);
      continue;
    }
    consumed_[*col] = true;
    std::size_t lo = std::min(k, *col);
    std::size_t hi = std::max(k, *col);
    for (auto cue : {pre_cue, post_cue}) {
      if (cue) {
        consumed_[*cue] = true;
        lo = std::min(lo, *cue);
        hi = std::max(hi, *cue);
      }
    }
    add_criterion(lo, hi, Predicate::compare(items_[*col].column, op.value_or(CompareOp::Eq), items_[k].number));
  }
}

void Assembler::bind_column_values() {
  for (std::size_t c = 0; c < items_.size(); ++c) {
    if (items_[c].kind != Kind::Column || consumed_[c]) continue;
    if (table_.column(items_[c].column).kind != ColumnKind::Textual) continue;
    auto v = adjacent_value(c, +1);
    if (!v) v = adjacent_value(c, -1);
    if (!v) continue;
    consumed_[c] = consumed_[*v] = true;
    add_criterion(c, *v, Predicate::match(items_[c].column, items_[*v].value));
  }
}

std::optional<NeedsClarification> Assembler::bind_bare_values() {
  for (std::size_t v = 0; v < items_.size(); ++v) {
    const auto& it = items_[v];
    if (it.kind != Kind::Value || consumed_[v]) continue;
    consumed_[v] = true;
    if (auto chosen = state_.resolved.find(v); chosen != state_.resolved.end()) {
      add_criterion(v, v, Predicate::match(chosen->second, it.value));
      continue;
    }
    if (it.hits.size() == 1) {
      add_criterion(v, v, Predicate::match(it.hits.front().column, it.value));
      continue;
    }
    if (it.hits.empty()) {
      fail("no column contains '" + diag(v).token + "'", v);
      continue;
    }
    ClarificationRequest req;
    req.ambiguous_value = it.value;
    req.surface = diag(v).token;
    req.item = v;
    req.pending = state_;
    for (const auto& h : it.hits) {
      req.candidates.push_back({h.column, table_.column(h.column).display_name, h.occurrences});
    }
    return NeedsClarification{std::move(req)};
  }
  return std::nullopt;
}

Predicate Assembler::build_predicate() {
  std::sort(criteria_.begin(), criteria_.end(),
            [](const Criterion& a, const Criterion& b) { return a.first_item < b.first_item; });

  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!is_cue(i, CueRole::Not) || consumed_[i]) continue;
    consumed_[i] = true;
    auto target = std::find_if(criteria_.begin(), criteria_.end(), [&](const Criterion& c) { return c.last_item > i; });
    if (target == criteria_.end()) {
      ignored_.push_back(diag(i));
    } else {
      ++target->negations;
    }
  }

  // linked[k]: criterion k is or-ed with criterion k + 1.
  std::vector<bool> linked(criteria_.size(), false);
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (!is_cue(i, CueRole::Or) || consumed_[i]) continue;
    consumed_[i] = true;
    std::optional<std::size_t> left;
    for (std::size_t k = 0; k < criteria_.size(); ++k) {
      if (criteria_[k].first_item < i) left = k;
    }
    if (left && *left + 1 < criteria_.size() && criteria_[*left + 1].first_item > i) {
      linked[*left] = true;
    } else {
      ignored_.push_back(diag(i));
    }
  }

  std::vector<Predicate> conjuncts;
  std::vector<Predicate> run;
  for (std::size_t k = 0; k < criteria_.size(); ++k) {
    Predicate p = criteria_[k].predicate;
    for (int n = 0; n < criteria_[k].negations; ++n) p = Predicate::negate(std::move(p));
    run.push_back(std::move(p));
    if (!linked[k]) {
      conjuncts.push_back(run.size() == 1 ? std::move(run.front()) : Predicate::any_of(std::move(run)));
      run.clear();
    }
  }
  if (conjuncts.empty()) return Predicate::always();
  if (conjuncts.size() == 1) return std::move(conjuncts.front());
  return Predicate::all_of(std::move(conjuncts));
}

ParseOutcome Assembler::run() {
  if (state_.tokens.empty()) return NotUnderstood{"nothing to interpret", {}};

  find_group_columns();
  bind_numbers();
  bind_column_values();
  if (auto clarification = bind_bare_values()) return std::move(*clarification);

  std::vector<std::size_t> most;
  std::vector<std::size_t> least;
  bool has_count = false;
  bool has_list = false;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].kind != Kind::Cue || consumed_[i]) continue;
    switch (items_[i].role) {
      case CueRole::Count:
        has_count = true;
        consumed_[i] = true;
        break;
      case CueRole::List:
        has_list = true;
        consumed_[i] = true;
        break;
      case CueRole::Most:
        most.push_back(i);
        consumed_[i] = true;
        break;
      case CueRole::Least:
        least.push_back(i);
        consumed_[i] = true;
        break;
      case CueRole::And:
        consumed_[i] = true;
        break;
      default:
        break;
    }
  }

  const Predicate predicate = build_predicate();

  // Leftover comparators have no number to attach to.
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (is_cue(i, CueRole::Comparator) && !consumed_[i]) {
      consumed_[i] = true;
      ignored_.push_back(diag(i));
    }
  }

  std::vector<std::size_t> standalone;
  for (std::size_t i = 0; i < items_.size(); ++i) {
    if (items_[i].kind == Kind::Column && !consumed_[i]) standalone.push_back(i);
    if (items_[i].kind == Kind::Unmatched) unmatched_.push_back(diag(i));
  }

  QueryIntent intent;
  intent.predicate = predicate;
  bool explicit_kind = true;
  if (!group_columns_.empty()) {
    if (!most.empty() || !least.empty()) {
      fail("most/least frequent per group is not supported");
    }
    intent.kind = IntentKind::GroupCount;
    intent.group_columns = group_columns_;
  } else if (has_count) {
    intent.kind = IntentKind::Count;
  } else if (!most.empty() || !least.empty()) {
    if (!most.empty() && !least.empty()) fail("asked for both the most and the least frequent value");
    const bool is_most = !most.empty();
    const auto cue = is_most ? most.front() : least.front();
    intent.kind = is_most ? IntentKind::MostFrequent : IntentKind::LeastFrequent;
    std::optional<std::size_t> target;
    for (auto s : standalone) {
      if (s > cue) {
        target = s;
        break;
      }
    }
    if (!target) {
      for (auto s : standalone) {
        if (s < cue) target = s;
      }
    }
    if (!target) {
      fail("which column should the most/least frequent value come from?", cue);
    } else {
      intent.target_column = items_[*target].column;
      std::erase(standalone, *target);
    }
  } else {
    intent.kind = IntentKind::Filter;
    explicit_kind = has_list;
  }

  if (intent.kind == IntentKind::Filter && !standalone.empty()) {
    std::vector<ColumnIndex> projection;
    for (auto s : standalone) {
      const auto col = items_[s].column;
      if (std::find(projection.begin(), projection.end(), col) == projection.end()) projection.push_back(col);
    }
    intent.projection = std::move(projection);
  } else {
    for (auto s : standalone) ignored_.push_back(diag(s));
  }

  const std::size_t anchors = criteria_.size() + intent.group_columns.size() + (intent.target_column ? 1 : 0) +
                              (intent.projection ? intent.projection->size() : 0);

  if (!failure_.empty()) return NotUnderstood{failure_, unmatched_};
  if (!explicit_kind && criteria_.empty()) {
    return NotUnderstood{"no criteria or request recognised", unmatched_};
  }
  if (!unmatched_.empty() && anchors == 0) {
    return NotUnderstood{"the request does not mention any column or value of this table", unmatched_};
  }

  Parsed out;
  out.intent = canonicalize(std::move(intent));
  out.ignored = std::move(unmatched_);
  out.ignored.insert(out.ignored.end(), ignored_.begin(), ignored_.end());
  std::sort(out.ignored.begin(), out.ignored.end(),
            [](const TokenDiagnostic& a, const TokenDiagnostic& b) { return a.begin < b.begin; });
  return out;
}

}  // namespace

ParseState analyze(std::string_view utterance, const TableDocument& table, const ValueIndex& index,
                   const Lexicon& lexicon) {
  ParseState st;
  st.utterance = std::string(utterance);
  st.tokens = tokenize(utterance);

  std::vector<std::string> texts;
  texts.reserve(st.tokens.size());
  for (const auto& t : st.tokens) texts.push_back(t.quoted ? std::string() : t.text);

  const auto n = st.tokens.size();
  std::size_t i = 0;
  while (i < n) {
    const auto& tok = st.tokens[i];
    LexItem item;
    item.first_token = i;
    item.end_token = i + 1;

    if (tok.quoted) {
      item.kind = Kind::Value;
      item.quoted = true;
      item.value = normalize_key(tok.text);
      const auto hits = index.lookup(item.value);
      item.hits.assign(hits.begin(), hits.end());
      st.items.push_back(std::move(item));
      ++i;
      continue;
    }
    if (auto cue = lexicon.cue_at(texts, i)) {
      item.kind = Kind::Cue;
      item.role = cue->role;
      item.op = cue->op;
      item.end_token = cue->span.end;
      st.items.push_back(std::move(item));
      i = cue->span.end;
      continue;
    }

    // Multi-word runs stop before a quoted literal or another cue.
    std::size_t limit = i + 1;
    while (limit < n && !st.tokens[limit].quoted && !lexicon.cue_at(texts, limit)) ++limit;

    std::size_t col_len = 0;
    ColumnIndex col = 0;
    for (std::size_t len = std::min(limit - i, kMaxColumnTokens); len >= 1; --len) {
      if (auto c = lookup_column(table, joined_key(st.tokens, i, i + len), lexicon.singularize_columns)) {
        col_len = len;
        col = *c;
        break;
      }
    }
    std::size_t val_len = 0;
    std::string val_key;
    std::span<const ColumnHit> val_hits;
    for (std::size_t len = std::min(limit - i, index.max_value_tokens() + 2); len >= 1; --len) {
      auto key = joined_key(st.tokens, i, i + len);
      if (key.empty()) continue;
      auto hits = index.lookup(key);
      if (!hits.empty()) {
        val_len = len;
        val_key = std::move(key);
        val_hits = hits;
        break;
      }
    }

    if (col_len > 0 && col_len >= val_len) {
      item.kind = Kind::Column;
      item.column = col;
      item.end_token = i + col_len;
    } else if (val_len > 0) {
      item.kind = Kind::Value;
      item.value = std::move(val_key);
      item.hits.assign(val_hits.begin(), val_hits.end());
      item.end_token = i + val_len;
      if (val_len == 1 && lexicon.is_stopword(tok.text)) {
        item.kind = Kind::Stop;
        item.value_alternative = true;
      }
    } else if (tok.is_number) {
      item.kind = Kind::Number;
      item.number = *parse_decimal(tok.text);
    } else if (lexicon.is_stopword(tok.text)) {
      item.kind = Kind::Stop;
    } else {
      item.kind = Kind::Unmatched;
    }
    i = item.end_token;
    st.items.push_back(std::move(item));
  }
  return st;
}

ParseOutcome assemble(const ParseState& state, const TableDocument& table, const Lexicon& lexicon) {
  return Assembler(state, table, lexicon).run();
}

ParseOutcome parse(std::string_view utterance, const TableDocument& table, const ValueIndex& index,
                   const Lexicon& lexicon) {
  return assemble(analyze(utterance, table, index, lexicon), table, lexicon);
}

ParseOutcome resume(const ClarificationRequest& request, ColumnIndex chosen, const TableDocument& table,
                    const Lexicon& lexicon) {
  const bool valid = std::any_of(request.candidates.begin(), request.candidates.end(),
                                 [&](const ClarificationCandidate& c) { return c.column == chosen; });
  if (!valid) {
    throw SessionError("InvalidChoice", "column " + std::to_string(chosen) + " is not one of the offered columns");
  }
  ParseState state = request.pending;
  state.resolved[request.item] = chosen;
  return assemble(state, table, lexicon);
}

std::optional<Predicate> parse_numeric_criterion(std::span<const Token> tokens, const TableDocument& table,
                                                 const Lexicon& lexicon) {
  std::string text;
  for (const auto& t : tokens) {
    if (!text.empty()) text += ' ';
    text += t.quoted ? "\"" + t.text + "\"" : t.text;
  }
  const ValueIndex no_values;
  auto state = analyze(text, table, no_values, lexicon);
  const auto numbers = std::count_if(state.items.begin(), state.items.end(),
                                     [](const LexItem& it) { return it.kind == Kind::Number; });
  if (numbers != 1) return std::nullopt;
  const auto outcome = assemble(state, table, lexicon);
  const auto* parsed = std::get_if<Parsed>(&outcome);
  if (!parsed) return std::nullopt;
  const auto& p = parsed->intent.predicate;
  if (p.kind == Predicate::Kind::NumCompare) return p;
  return std::nullopt;
}

}  // namespace sir
