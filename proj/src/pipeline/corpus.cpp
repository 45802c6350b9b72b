#include "tracelab/pipeline/corpus.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "tracelab/common/rng.hpp"

namespace tracelab::pipeline {

namespace {

using Names = std::map<std::string, std::string>;

// Replaces every @key@ in `text`.
std::string fill(std::string text, const Names& names) {
  for (const auto& [key, value] : names) {
    std::string marker = "@" + key + "@";
    for (auto pos = text.find(marker); pos != std::string::npos; pos = text.find(marker, pos + value.size())) {
      text.replace(pos, marker.size(), value);
    }
  }
  return text;
}

// Draws distinct identifiers, one per role, from per-role pools.
Names pick_names(Rng& rng, const std::map<std::string, std::vector<std::string>>& pools) {
  Names out;
  std::vector<std::string> used;
  for (const auto& [role, pool] : pools) {
    std::string name;
    do {
      name = rng.pick(pool);
    } while (std::find(used.begin(), used.end(), name) != used.end());
    used.push_back(name);
    out[role] = name;
  }
  return out;
}

std::string num(std::int64_t v) { return std::to_string(v); }

std::string real(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

struct Generated {
  std::vector<std::string> sources;
  std::vector<std::string> inputs;
};

using Family = std::function<Generated(Rng&, std::size_t)>;

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) out += (out.empty() ? "" : " ") + p;
  return out;
}

Generated threshold_family(Rng& rng, std::size_t variants) {
  std::int64_t lo = rng.range(-20, 20);
  std::int64_t hi = lo + rng.range(5, 200);
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"x", {"x", "value", "num", "v", "score"}},
                              {"c", {"c", "cls", "kind", "band"}},
                              {"f", {"classify", "bucket", "grade"}},
                              {"p", {"t", "q", "w"}}});
    n["lo"] = num(lo);
    n["hi"] = num(hi);
    if (v % 2 == 0) {
      g.sources.push_back(fill(R"(int @f@(int @p@)
{
    if (@p@ < @lo@) {
        return -1;
    }
    else if (@p@ < @hi@) {
        return 0;
    }
    return 1;
}

int main()
{
    int @x@ = read_int();
    int @c@ = @f@(@x@);
    if (@c@ == 0) {
        print(@x@);
    }
    return @c@;
}
)", n));
    } else {
      g.sources.push_back(fill(R"(int main()
{
    int @x@ = read_int();
    int @c@;
    if (@x@ >= @hi@) {
        @c@ = 1;
    }
    else if (@x@ >= @lo@) {
        @c@ = 0;
        print(@x@);
    }
    else {
        @c@ = -1;
    }
    return @c@;
}
)", n));
    }
  }
  std::vector<std::int64_t> pool = {lo - rng.range(1, 50), lo, (lo + hi) / 2, hi, hi + rng.range(1, 20000),
                                    -rng.range(10000, 50000)};
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  g.inputs.push_back(num(pool[0]));
  g.inputs.push_back(num(pool[4]));
  while (g.inputs.size() < count) g.inputs.push_back(num(rng.pick(pool)));
  return g;
}

Generated accumulator_family(Rng& rng, std::size_t variants) {
  int op = static_cast<int>(rng.below(3));
  static const std::array<const char*, 3> kStep = {"@a@ = @a@ * @i@;", "@a@ += @i@;", "@a@ += @i@ * @i@;"};
  static const std::array<const char*, 3> kInit = {"1", "0", "0"};
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"n", {"n", "limit", "count", "m"}},
                              {"r", {"r", "res", "out", "answer"}},
                              {"a", {"acc", "total", "y", "prod"}},
                              {"i", {"i", "j", "k"}},
                              {"f", {"accumulate", "fold", "series"}},
                              {"p", {"upto", "bound", "top"}}});
    n["init"] = kInit[static_cast<std::size_t>(op)];
    std::string loop = v % 2 == 0 ? R"(    for (int @i@ = 1; @i@ <= @p@; @i@++) {
        STEP
    }
)"
                                  : R"(    int @i@ = 1;
    while (@i@ <= @p@) {
        STEP
        @i@++;
    }
)";
    loop.replace(loop.find("STEP"), 4, kStep[static_cast<std::size_t>(op)]);
    g.sources.push_back(fill(R"(int @f@(int @p@)
{
    long @a@ = @init@;
)" + loop + R"(    return @a@;
}

int main()
{
    int @n@ = read_int();
    int @r@;
    if (@n@ < 0) {
        @r@ = 0;
    }
    else {
        @r@ = @f@(@n@);
    }
    return @r@;
}
)", n));
  }
  std::int64_t top = op == 0 ? 15 : 150;
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  g.inputs.push_back(num(-rng.range(1, 3)));
  while (g.inputs.size() < count) g.inputs.push_back(num(rng.range(0, top)));
  return g;
}

Generated digits_family(Rng& rng, std::size_t variants) {
  int op = static_cast<int>(rng.below(3));
  static const std::array<const char*, 3> kStep = {"@d@ += @p@ % 10;", "@d@++;", "@d@ = @d@ * 10 + @p@ % 10;"};
  std::int64_t k = rng.range(3, 30);
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"x", {"x", "num", "value"}},
                              {"d", {"d", "digits", "acc", "rev"}},
                              {"r", {"r", "res", "got"}},
                              {"f", {"digits_of", "scan", "walk"}},
                              {"p", {"n", "rest", "w"}}});
    n["k"] = num(k);
    std::string loop = v % 2 == 0 ? R"(    while (@p@ > 0) {
        STEP
        @p@ = @p@ / 10;
    }
)"
                                  : R"(    for (; @p@ > 0; @p@ /= 10) {
        STEP
    }
)";
    loop.replace(loop.find("STEP"), 4, kStep[static_cast<std::size_t>(op)]);
    g.sources.push_back(fill(R"(int @f@(int @p@)
{
    int @d@ = 0;
    if (@p@ < 0) {
        @p@ = -@p@;
    }
)" + loop + R"(    return @d@;
}

int main()
{
    int @x@ = read_int();
    int @r@ = @f@(@x@);
    if (@r@ > @k@) {
        print(@r@);
    }
    return 0;
}
)", n));
  }
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  g.inputs.push_back(num(rng.range(0, 9)));
  g.inputs.push_back(num(rng.range(100000, 99999999)));
  while (g.inputs.size() < count) g.inputs.push_back(num(rng.range(-100000, 100000)));
  return g;
}

Generated array_family(Rng& rng, std::size_t variants) {
  bool want_max = rng.coin();
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"k", {"k", "len", "n"}},
                              {"a", {"data", "arr", "vals"}},
                              {"m", {"m", "best", "top"}},
                              {"i", {"i", "j"}},
                              {"f", {"extreme", "scan_arr", "pick"}},
                              {"q", {"xs", "p", "buf"}},
                              {"c", {"cnt", "size", "used"}},
                              {"b", {"b", "cur", "e"}},
                              {"t", {"t", "idx", "pos"}}});
    n["cmp"] = want_max ? ">" : "<";
    std::string scan = v % 2 == 0 ? R"(    for (int @t@ = 1; @t@ < @c@; @t@++) {
        if (@q@[@t@] @cmp@ @b@) {
            @b@ = @q@[@t@];
        }
    }
)"
                                  : R"(    int @t@ = 1;
    while (@t@ < @c@) {
        if (@q@[@t@] @cmp@ @b@) {
            @b@ = @q@[@t@];
        }
        @t@ = @t@ + 1;
    }
)";
    g.sources.push_back(fill(R"(int @f@(int *@q@, int @c@)
{
    int @b@ = @q@[0];
)" + scan + R"(    return @b@;
}

int main()
{
    int @k@ = read_int();
    int @a@[8];
    if (@k@ > 8) {
        @k@ = 8;
    }
    if (@k@ < 1) {
        @k@ = 1;
    }
    for (int @i@ = 0; @i@ < @k@; @i@++) {
        @a@[@i@] = read_int();
    }
    int @m@ = @f@(@a@, @k@);
    return @m@;
}
)", n));
  }
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t k = i == 0 ? 1 : rng.range(0, 10);
    std::vector<std::string> parts = {num(k)};
    for (std::int64_t j = 0; j < std::max<std::int64_t>(1, std::min<std::int64_t>(k, 8)); ++j) {
      parts.push_back(num(rng.range(-500, 500)));
    }
    g.inputs.push_back(join(parts));
  }
  return g;
}

Generated string_family(Rng& rng, std::size_t variants) {
  char target = static_cast<char>('a' + rng.below(3));
  std::int64_t k = rng.range(1, 4);
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"w", {"w", "word", "text"}},
                              {"h", {"hits", "found", "matches"}},
                              {"f", {"count_char", "tally", "occurs"}},
                              {"s", {"s", "str", "buf"}},
                              {"c", {"c", "ch", "want"}},
                              {"n", {"n", "seen"}},
                              {"i", {"i", "pos"}}});
    n["t"] = std::string("'") + target + "'";
    n["k"] = num(k);
    g.sources.push_back(fill(R"(int @f@(char *@s@, char @c@)
{
    int @n@ = 0;
    int @i@ = 0;
    while (@s@[@i@] != '\0') {
        if (@s@[@i@] == @c@) {
            @n@++;
        }
        @i@++;
    }
    return @n@;
}

int main()
{
    char *@w@ = read_str();
    int @h@ = @f@(@w@, @t@);
    if (@h@ > @k@) {
        print(@w@);
    }
    return @h@;
}
)", n));
  }
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t len = i == 0 ? 1 : rng.below(5) == 0 ? 64 + rng.below(8) : 1 + rng.below(12);
    std::string word;
    for (std::size_t j = 0; j < len; ++j) word += static_cast<char>('a' + rng.below(5));
    g.inputs.push_back(word);
  }
  return g;
}

Generated float_family(Rng& rng, std::size_t variants) {
  double threshold = static_cast<double>(rng.range(-40, 400)) / 4.0;
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"a", {"a", "lhs", "first"}},
                              {"b", {"b", "rhs", "second"}},
                              {"m", {"avg", "mid", "mean"}},
                              {"s", {"shown", "out", "f"}},
                              {"fn", {"scale", "shrink", "damp"}},
                              {"x", {"x", "val"}},
                              {"k", {"factor", "by"}}});
    n["t"] = real(threshold);
    g.sources.push_back(fill(R"(double @fn@(double @x@, double @k@)
{
    return @x@ * @k@;
}

int main()
{
    double @a@ = read_float();
    double @b@ = read_float();
    double @m@ = (@a@ + @b@) / 2.0;
    if (@m@ > @t@) {
        @m@ = @fn@(@m@, 0.5);
    }
    else {
        @m@ = @m@ + 1.0;
    }
    float @s@ = @m@;
    return 0;
}
)", n));
  }
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  for (std::size_t i = 0; i < count; ++i) {
    double a = static_cast<double>(rng.range(-80000, 80000)) / 4.0;
    double b = i == 0 ? -a : static_cast<double>(rng.range(-80000, 80000)) / 4.0;
    g.inputs.push_back(real(a) + " " + real(b));
  }
  return g;
}

Generated switch_family(Rng& rng, std::size_t variants) {
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"op", {"op", "code", "sel"}},
                              {"a", {"a", "x", "l"}},
                              {"b", {"b", "y", "rr"}},
                              {"r", {"r", "res", "out"}},
                              {"f", {"apply", "calc", "eval_op"}},
                              {"v", {"v", "answer"}}});
    g.sources.push_back(fill(R"(int @f@(int @op@, int @a@, int @b@)
{
    int @r@ = 0;
    switch (@op@) {
        case 0:
            @r@ = @a@ + @b@;
            break;
        case 1:
            @r@ = @a@ - @b@;
            break;
        case 2:
            @r@ = @a@ * @b@;
            break;
        case 3:
            if (@b@ != 0) {
                @r@ = @a@ / @b@;
            }
            break;
        default:
            @r@ = -1;
    }
    return @r@;
}

int main()
{
    int @op@ = read_int();
    int @a@ = read_int();
    int @b@ = read_int();
    int @v@ = @f@(@op@, @a@, @b@);
    return @v@;
}
)", n));
  }
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t op = i == 0 ? 4 : rng.range(0, 4);
    g.inputs.push_back(join({num(op), num(rng.range(-50, 50)), num(rng.range(-5, 5))}));
  }
  return g;
}

Generated struct_family(Rng& rng, std::size_t variants) {
  std::int64_t threshold = rng.range(0, 100);
  Generated g;
  for (std::size_t v = 0; v < variants; ++v) {
    auto n = pick_names(rng, {{"acc", {"acc", "st", "agg"}},
                              {"a", {"a", "stats", "box"}},
                              {"n", {"n", "times"}},
                              {"i", {"i", "step"}},
                              {"x", {"x", "item"}},
                              {"f", {"add", "push", "feed"}}});
    n["t"] = num(threshold);
    g.sources.push_back(fill(R"(struct Acc {
    int count;
    long total;
    bool seen;
};

void @f@(struct Acc *@acc@, int @x@)
{
    @acc@->count = @acc@->count + 1;
    @acc@->total += @x@;
    if (@x@ > @t@) {
        @acc@->seen = true;
    }
}

int main()
{
    struct Acc @a@;
    @a@.count = 0;
    @a@.total = 0;
    @a@.seen = false;
    int @n@ = read_int();
    int @i@ = 0;
    while (@i@ < @n@) {
        @f@(&@a@, read_int());
        @i@++;
    }
    return @a@.count;
}
)", n));
  }
  std::size_t count = static_cast<std::size_t>(rng.range(2, 5));
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t k = i == 0 ? 0 : rng.range(1, 5);
    std::vector<std::string> parts = {num(k)};
    for (std::int64_t j = 0; j < k; ++j) parts.push_back(num(rng.range(-200, 300)));
    g.inputs.push_back(join(parts));
  }
  return g;
}

const std::vector<Family>& families() {
  static const std::vector<Family> all = {threshold_family, accumulator_family, digits_family, array_family,
                                          string_family,    float_family,       switch_family, struct_family};
  return all;
}

}  // namespace

std::vector<CorpusProblem> gen_corpus(std::uint64_t seed, std::size_t n_problems, std::size_t variants_per_problem) {
  if (n_problems < 2) throw std::invalid_argument("a corpus needs at least 2 problems");
  if (variants_per_problem < 1) throw std::invalid_argument("a problem needs at least 1 variant");
  std::vector<CorpusProblem> corpus;
  for (std::size_t p = 0; p < n_problems; ++p) {
    Rng rng(mix_seed(seed, p));
    const auto& family = families()[(p + seed) % families().size()];
    Generated g = family(rng, variants_per_problem);
    char id[32];
    std::snprintf(id, sizeof id, "p%04zu", p);
    CorpusProblem problem{id, {}, {}};
    for (const auto& src : g.sources) problem.programs.emplace_back(minic::normalize_source(src), id);
    for (const auto& in : g.inputs) problem.inputs.push_back(minic::ExecInput::from_text(in));
    corpus.push_back(std::move(problem));
  }
  return corpus;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void write_corpus(const std::filesystem::path& dir, const std::vector<CorpusProblem>& corpus) {
  for (const auto& problem : corpus) {
    auto pdir = dir / problem.problem_id;
    std::filesystem::create_directories(pdir);
    for (std::size_t j = 0; j < problem.programs.size(); ++j) {
      write_file(pdir / ("v" + std::to_string(j) + ".mc"), problem.programs[j].text());
    }
    for (std::size_t k = 0; k < problem.inputs.size(); ++k) {
      write_file(pdir / ("in" + std::to_string(k) + ".in"), problem.inputs[k].to_text() + "\n");
    }
  }
}

namespace {

// Files named <prefix><number><ext>, ordered by number.
std::vector<std::filesystem::path> numbered(const std::filesystem::path& dir, const std::string& prefix,
                                            const std::string& ext) {
  std::vector<std::pair<long, std::filesystem::path>> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ext) continue;
    auto stem = entry.path().stem().string();
    if (stem.rfind(prefix, 0) != 0) continue;
    long index = 0;
    auto digits = std::string_view(stem).substr(prefix.size());
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) continue;
    found.emplace_back(index, entry.path());
  }
  std::sort(found.begin(), found.end());
  std::vector<std::filesystem::path> out;
  for (auto& [i, p] : found) out.push_back(std::move(p));
  return out;
}

}  // namespace

std::vector<CorpusProblem> read_corpus(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw std::runtime_error("corpus directory " + dir.string() + " not found");
  std::vector<std::filesystem::path> problem_dirs;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_directory()) problem_dirs.push_back(entry.path());
  }
  std::sort(problem_dirs.begin(), problem_dirs.end());
  std::vector<CorpusProblem> corpus;
  for (const auto& pdir : problem_dirs) {
    CorpusProblem problem{pdir.filename().string(), {}, {}};
    for (const auto& p : numbered(pdir, "v", ".mc")) problem.programs.emplace_back(read_file(p), problem.problem_id);
    for (const auto& p : numbered(pdir, "in", ".in")) problem.inputs.push_back(minic::ExecInput::from_text(read_file(p)));
    if (problem.programs.empty() || problem.inputs.empty()) {
      throw std::runtime_error("problem " + problem.problem_id + " needs at least one program and one input");
    }
    corpus.push_back(std::move(problem));
  }
  return corpus;
}

}  // namespace tracelab::pipeline
