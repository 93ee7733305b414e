#include "koala/csa/suffix_array.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

namespace koala::csa {
namespace {

template <class Text>
std::vector<std::int32_t> naive_sort(const Text& s) {
  const auto n = static_cast<std::int32_t>(s.size());
  std::vector<std::int32_t> sa(n);
  std::iota(sa.begin(), sa.end(), 0);
  std::sort(sa.begin(), sa.end(), [&](std::int32_t a, std::int32_t b) {
    if (a == b) return false;
    while (a < n && b < n) {
      if (s[a] != s[b]) return s[a] < s[b];
      ++a, ++b;
    }
    return a == n;
  });
  return sa;
}

// SA-IS (Nong, Zhang & Chan) on an integer text with symbols in [0, upper].
// No sentinel is assumed; the end of the text compares smaller than any
// symbol.
template <class Text>
std::vector<std::int32_t> sa_is(const Text& s, std::int32_t upper) {
  const auto n = static_cast<std::int32_t>(s.size());
  if (n == 0) return {};
  if (n == 1) return {0};
  if (n < 16) return naive_sort(s);

  std::vector<std::int32_t> sa(n);
  // is_s[i]: suffix i is S-type (smaller than suffix i + 1).
  std::vector<bool> is_s(n);
  for (std::int32_t i = n - 2; i >= 0; --i) {
    is_s[i] = s[i] == s[i + 1] ? is_s[i + 1] : s[i] < s[i + 1];
  }

  // Bucket boundaries: l_start[c] is where the bucket of symbol c (and its
  // L-type part) begins, s_start[c] where its S-type part begins. The
  // largest symbol is never S-type, so l_start[c + 1] is always in range
  // when inducing S-type suffixes.
  std::vector<std::int32_t> l_start(upper + 1, 0), s_start(upper + 1, 0);
  for (std::int32_t i = 0; i < n; ++i) {
    if (!is_s[i]) {
      ++s_start[s[i]];
    } else {
      ++l_start[s[i] + 1];
    }
  }
  for (std::int32_t c = 0; c <= upper; ++c) {
    s_start[c] += l_start[c];
    if (c < upper) l_start[c + 1] += s_start[c];
  }

  auto induce = [&](const std::vector<std::int32_t>& lms) {
    std::fill(sa.begin(), sa.end(), -1);
    std::vector<std::int32_t> buf(upper + 1);
    std::copy(s_start.begin(), s_start.end(), buf.begin());
    for (auto d : lms) {
      if (d == n) continue;
      sa[buf[s[d]]++] = d;
    }
    std::copy(l_start.begin(), l_start.end(), buf.begin());
    sa[buf[s[n - 1]]++] = n - 1;
    for (std::int32_t i = 0; i < n; ++i) {
      const auto v = sa[i];
      if (v >= 1 && !is_s[v - 1]) sa[buf[s[v - 1]]++] = v - 1;
    }
    std::copy(l_start.begin(), l_start.end(), buf.begin());
    for (std::int32_t i = n - 1; i >= 0; --i) {
      const auto v = sa[i];
      if (v >= 1 && is_s[v - 1]) sa[--buf[s[v - 1] + 1]] = v - 1;
    }
  };

  std::vector<std::int32_t> lms_index(n + 1, -1);
  std::vector<std::int32_t> lms;
  for (std::int32_t i = 1; i < n; ++i) {
    if (!is_s[i - 1] && is_s[i]) {
      lms_index[i] = static_cast<std::int32_t>(lms.size());
      lms.push_back(i);
    }
  }
  const auto m = static_cast<std::int32_t>(lms.size());

  induce(lms);

  if (m == 0) return sa;

  std::vector<std::int32_t> sorted_lms;
  sorted_lms.reserve(m);
  for (auto v : sa) {
    if (lms_index[v] != -1) sorted_lms.push_back(v);
  }

  // Name LMS substrings; equal substrings share a name.
  std::vector<std::int32_t> reduced(m);
  std::int32_t names = 0;
  reduced[lms_index[sorted_lms[0]]] = 0;
  for (std::int32_t i = 1; i < m; ++i) {
    auto l = sorted_lms[i - 1];
    auto r = sorted_lms[i];
    const auto end_l = lms_index[l] + 1 < m ? lms[lms_index[l] + 1] : n;
    const auto end_r = lms_index[r] + 1 < m ? lms[lms_index[r] + 1] : n;
    bool same = true;
    if (end_l - l != end_r - r) {
      same = false;
    } else {
      while (l < end_l && s[l] == s[r]) ++l, ++r;
      if (l == n || s[l] != s[r]) same = false;
    }
    if (!same) ++names;
    reduced[lms_index[sorted_lms[i]]] = names;
  }
  lms_index.clear();
  lms_index.shrink_to_fit();

  const auto reduced_sa = sa_is(reduced, names);
  for (std::int32_t i = 0; i < m; ++i) sorted_lms[i] = lms[reduced_sa[i]];
  induce(sorted_lms);
  return sa;
}

}  // namespace

void check_terminated(std::span<const Symbol> text) {
  if (text.empty() || text.back() != kTerminator) {
    throw BuildError("text must end with the terminator symbol");
  }
  if (std::find(text.begin(), text.end() - 1, kTerminator) != text.end() - 1) {
    throw BuildError("terminator symbol occurs more than once");
  }
}

SuffixArray build_suffix_array(std::span<const Symbol> text) {
  check_terminated(text);
  if (text.size() >
      static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
    throw BuildError("text too long for 32-bit suffix positions");
  }
  const Symbol upper = *std::max_element(text.begin(), text.end());
  if (upper > static_cast<Symbol>(std::numeric_limits<std::int32_t>::max() - 2)) {
    throw BuildError("alphabet too large");
  }
  return sa_is(text, static_cast<std::int32_t>(upper));
}

std::vector<Symbol> bwt_from_sa(std::span<const Symbol> text,
                                std::span<const std::int32_t> sa) {
  const std::size_t n = text.size();
  std::vector<Symbol> bwt(n);
  for (std::size_t i = 0; i < n; ++i) {
    bwt[i] = text[(static_cast<std::size_t>(sa[i]) + n - 1) % n];
  }
  return bwt;
}

}  // namespace koala::csa
