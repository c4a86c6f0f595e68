#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions directly (enumeration, full scans, normal equations) and share
// no code with the library beyond plain data types.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace oracle {

/// DCG with the max(1, log_b j) discount, written as a plain loop.
inline double dcg(const std::vector<int>& grades, std::size_t k, double base = 2.0) {
    double sum = 0.0;
    for (std::size_t rank = 1; rank <= grades.size() && rank <= k; ++rank) {
        double discount = std::log(static_cast<double>(rank)) / std::log(base);
        if (discount < 1.0) discount = 1.0;
        sum += grades[rank - 1] / discount;
    }
    return sum;
}

/// Ideal DCG by trying every ordering of the judged grades.
inline double ideal_dcg_by_permutation(std::vector<int> grades, std::size_t k, double base = 2.0) {
    std::sort(grades.begin(), grades.end());
    double best = 0.0;
    do {
        best = std::max(best, dcg(grades, k, base));
    } while (std::next_permutation(grades.begin(), grades.end()));
    return best;
}

/// Ideal DCG from the judged grades sorted in decreasing order.
inline double ideal_dcg_by_sorting(std::vector<int> grades, std::size_t k, double base = 2.0) {
    std::sort(grades.begin(), grades.end(), std::greater<>());
    return dcg(grades, k, base);
}

/// NDCG@k; returns -1 when no judged document is relevant. Small judgment
/// pools use exhaustive permutation for the ideal ranking.
inline double ndcg(const std::vector<std::string>& run, const std::map<std::string, int>& qrels, std::size_t k,
                   double base = 2.0) {
    std::vector<int> judged;
    for (const auto& [doc, g] : qrels) judged.push_back(g);
    const double ideal =
        judged.size() <= 9 ? ideal_dcg_by_permutation(judged, k, base) : ideal_dcg_by_sorting(judged, k, base);
    if (ideal == 0.0) return -1.0;
    std::vector<int> got;
    for (const auto& doc : run) {
        auto it = qrels.find(doc);
        got.push_back(it == qrels.end() ? 0 : it->second);
    }
    return dcg(got, k, base) / ideal;
}

inline double precision_at(const std::vector<std::string>& run, const std::map<std::string, int>& qrels, std::size_t k) {
    double hits = 0;
    for (std::size_t i = 0; i < k; ++i) {
        if (i >= run.size()) continue;
        auto it = qrels.find(run[i]);
        if (it != qrels.end() && it->second > 0) hits += 1;
    }
    return hits / static_cast<double>(k);
}

/// R-precision; returns -1 when the topic has no relevant document.
inline double r_precision(const std::vector<std::string>& run, const std::map<std::string, int>& qrels) {
    std::size_t r = 0;
    for (const auto& [doc, g] : qrels) r += g > 0;
    if (r == 0) return -1.0;
    return precision_at(run, qrels, r);
}

/// Macro-F1 from tp/fp/fn counts, F1 = 2tp / (2tp + fp + fn).
inline double macro_f1(const std::vector<int>& predicted, const std::vector<int>& truth, int classes = 7) {
    double sum = 0.0;
    int used = 0;
    for (int c = 0; c < classes; ++c) {
        double tp = 0, fp = 0, fn = 0;
        bool occurs = false;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (predicted[i] == c || truth[i] == c) occurs = true;
            if (predicted[i] == c && truth[i] == c) tp += 1;
            if (predicted[i] == c && truth[i] != c) fp += 1;
            if (predicted[i] != c && truth[i] == c) fn += 1;
        }
        if (!occurs) continue;
        ++used;
        sum += tp == 0 ? 0.0 : 2 * tp / (2 * tp + fp + fn);
    }
    return used ? sum / used : 0.0;
}

inline double rmse(const std::vector<int>& predicted, const std::vector<int>& truth) {
    long double s = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) s += static_cast<long double>(predicted[i] - truth[i]) * (predicted[i] - truth[i]);
    return static_cast<double>(std::sqrt(s / truth.size()));
}

/// BM25 by scanning every document's token list.
struct Bm25 {
    std::vector<std::vector<std::string>> docs;
    double k1 = 1.2;
    double b = 0.75;

    double avgdl() const {
        double total = 0;
        for (const auto& d : docs) total += static_cast<double>(d.size());
        return total / static_cast<double>(docs.size());
    }

    std::size_t df(const std::string& term) const {
        std::size_t n = 0;
        for (const auto& d : docs) n += std::find(d.begin(), d.end(), term) != d.end();
        return n;
    }

    /// Returns -1 for a document that contains none of the query terms.
    double score(const std::vector<std::string>& query, std::size_t doc) const {
        const std::set<std::string> distinct(query.begin(), query.end());
        const double n = static_cast<double>(docs.size());
        const double avg = avgdl();
        bool matched = false;
        double s = 0.0;
        for (const auto& term : distinct) {
            const double tf = static_cast<double>(std::count(docs[doc].begin(), docs[doc].end(), term));
            if (tf == 0) continue;
            matched = true;
            const double d = static_cast<double>(df(term));
            const double idf = std::log(1.0 + (n - d + 0.5) / (d + 0.5));
            const double len = static_cast<double>(docs[doc].size());
            s += idf * (tf * (k1 + 1.0)) / (tf + k1 * (1.0 - b + b * len / avg));
        }
        return matched ? s : -1.0;
    }
};

/// Solves A x = y by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<long double>> a, std::vector<long double> y) {
    const std::size_t n = y.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(y[col], y[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const long double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            y[r] -= f * y[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t i = n; i-- > 0;) {
        long double s = y[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
        x[i] = static_cast<double>(s / a[i][i]);
    }
    return x;
}

/// Weighted least squares with intercept via the normal equations.
/// rows[i] are 0/1 indicators; result is intercept followed by one
/// coefficient per column.
inline std::vector<double> weighted_least_squares(const std::vector<std::vector<int>>& rows, const std::vector<double>& w,
                                                  const std::vector<double>& y) {
    const std::size_t p = rows.front().size() + 1;
    std::vector<std::vector<long double>> xtx(p, std::vector<long double>(p, 0.0L));
    std::vector<long double> xty(p, 0.0L);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::vector<long double> x(p);
        x[0] = 1;
        for (std::size_t j = 1; j < p; ++j) x[j] = rows[i][j - 1];
        for (std::size_t r = 0; r < p; ++r) {
            xty[r] += w[i] * x[r] * y[i];
            for (std::size_t c = 0; c < p; ++c) xtx[r][c] += w[i] * x[r] * x[c];
        }
    }
    return solve(xtx, xty);
}

inline double binomial(std::size_t n, std::size_t k) {
    double r = 1;
    for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return r;
}

/// Probability of drawing a given mask with `removed` of m terms removed
/// under the explainer's sampling scheme (removal count uniform in [1, m],
/// removed terms uniform among subsets of that size).
inline double mask_probability(std::size_t m, std::size_t removed) {
    if (removed == 0) return 0.0;
    return 1.0 / static_cast<double>(m) / binomial(m, removed);
}

/// Student t CDF by Simpson integration of the density from 0 to |t|.
inline double t_cdf_by_integration(double t, double df, int intervals = 20000) {
    const double c = std::exp(std::lgamma((df + 1) / 2) - std::lgamma(df / 2)) / std::sqrt(df * M_PI);
    auto pdf = [&](double x) { return c * std::pow(1 + x * x / df, -(df + 1) / 2); };
    const double a = std::fabs(t);
    const double h = a / intervals;
    double s = pdf(0) + pdf(a);
    for (int i = 1; i < intervals; ++i) s += pdf(i * h) * (i % 2 ? 4 : 2);
    const double half = s * h / 3;
    return t >= 0 ? 0.5 + half : 0.5 - half;
}

}  // namespace oracle
