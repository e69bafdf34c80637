#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace leaders::concerns {

/// A named concern and its keywords. A name of the form "group:sub" is a
/// sub-concern that merges into "group" for contingency tables.
struct Concern {
    std::string name;
    std::vector<std::string> keywords;       // as written, lowercase
    std::vector<std::string> stemmed;        // matching form
};

class ConcernLexicon {
public:
    ConcernLexicon() = default;
    /// Keywords are lowercased and Porter-stemmed. Throws InvalidArgument on
    /// duplicate or empty names.
    explicit ConcernLexicon(std::vector<std::pair<std::string, std::vector<std::string>>> concerns);

    /// symptoms, vaccination, countermeasures:hygiene, countermeasures:mask,
    /// travel, pandemic.
    static ConcernLexicon defaults();

    std::size_t size() const noexcept { return concerns_.size(); }
    const Concern& operator[](std::size_t i) const { return concerns_[i]; }
    const std::vector<Concern>& concerns() const noexcept { return concerns_; }

    /// Merged column names in first-appearance order ("countermeasures:hygiene"
    /// and "countermeasures:mask" become "countermeasures").
    std::vector<std::string> merged_names() const;
    /// Merged column index of concern i.
    std::size_t merged_index(std::size_t i) const { return merged_of_[i]; }

private:
    std::vector<Concern> concerns_;
    std::vector<std::string> merged_;
    std::vector<std::size_t> merged_of_;
};

/// Reads a TOML file whose `[concerns]` table maps names to keyword arrays.
/// Concerns keep the order in which they appear in the file.
ConcernLexicon load_concern_lexicon(const std::filesystem::path& path);

/// Indices (ascending) of the concerns a tweet carries.
struct ConcernLabels {
    std::vector<std::size_t> concerns;

    bool empty() const noexcept { return concerns.empty(); }
    friend bool operator==(const ConcernLabels&, const ConcernLabels&) = default;
};

/// A concern is present iff one of its stemmed keywords is among the (stemmed)
/// tokens.
ConcernLabels annotate_concerns(std::span<const std::string> tokens, const ConcernLexicon& lexicon);

/// 0/1 indicator per merged concern column.
std::vector<double> merged_indicators(const ConcernLabels& labels, const ConcernLexicon& lexicon);

struct ContingencyTable {
    std::vector<std::string> rows;
    std::vector<std::string> cols;
    std::vector<std::uint64_t> cells;  // row-major

    std::uint64_t at(std::size_t r, std::size_t c) const { return cells[r * cols.size() + c]; }
    std::uint64_t& at(std::size_t r, std::size_t c) { return cells[r * cols.size() + c]; }

    /// Drops rows and columns whose totals are zero.
    ContingencyTable pruned() const;
};

struct Alignment {
    ContingencyTable table;
    /// Row-normalized shares, same layout as table.cells.
    std::vector<double> shares;
};

/// Cross-tabulates clusters against merged concerns. A tweet with k labels
/// adds to k cells (labels merging into the same column count once). Clusters
/// with no labeled tweet are omitted. Throws InvalidArgument("empty contingency")
/// when no tweet carries a label.
Alignment concern_alignment(std::span<const ConcernLabels> labels, std::span<const std::uint32_t> cluster_of,
                            std::span<const std::string> cluster_names, const ConcernLexicon& lexicon);

/// CSV `cluster,concern,count,share`.
void write_alignment(const std::filesystem::path& path, const Alignment& alignment);

struct ChiSquareResult {
    double statistic = 0.0;
    int df = 0;
    double p_value = 1.0;
    double alpha = 0.05;
    bool reject_null = false;
};

/// Pearson chi-square test of independence (no continuity correction).
/// Throws InvalidArgument("degenerate table") if an expected count is zero and
/// InvalidArgument for tables smaller than 2x2.
ChiSquareResult chi_square_independence(const ContingencyTable& table, double alpha = 0.05);

/// JSON `{statistic, df, p_value, alpha, reject_null}`.
std::string to_json(const ChiSquareResult& result);
void write_chi_square(const std::filesystem::path& path, const ChiSquareResult& result);

}  // namespace leaders::concerns
