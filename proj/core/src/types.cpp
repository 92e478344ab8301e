#include "wristlog/types.hpp"

#include <algorithm>

namespace wristlog {

LabelCodebook::LabelCodebook(std::vector<std::string> alphabet) : alphabet_(std::move(alphabet)) {
    for (std::size_t i = 0; i < alphabet_.size(); ++i) {
        for (std::size_t j = i + 1; j < alphabet_.size(); ++j) {
            if (alphabet_[i] == alphabet_[j])
                throw std::invalid_argument("duplicate symbol in codebook: " + alphabet_[i]);
        }
    }
}

LabelCodebook LabelCodebook::keypad12() {
    return LabelCodebook({"1", "2", "3", "4", "5", "6", "7", "8", "9", "*", "0", "#"});
}

LabelCodebook LabelCodebook::from_labels(const std::vector<LabelEvent>& labels) {
    std::vector<std::string> symbols;
    for (const LabelEvent& l : labels) symbols.push_back(l.label);
    std::sort(symbols.begin(), symbols.end());
    symbols.erase(std::unique(symbols.begin(), symbols.end()), symbols.end());
    return LabelCodebook(std::move(symbols));
}

std::size_t LabelCodebook::index_of(const std::string& symbol) const {
    auto it = std::find(alphabet_.begin(), alphabet_.end(), symbol);
    if (it == alphabet_.end()) throw std::out_of_range("symbol not in codebook: " + symbol);
    return static_cast<std::size_t>(it - alphabet_.begin());
}

const std::string& LabelCodebook::symbol_at(std::size_t index) const {
    if (index >= alphabet_.size()) throw std::out_of_range("codebook index out of range");
    return alphabet_[index];
}

bool LabelCodebook::contains(const std::string& symbol) const {
    return std::find(alphabet_.begin(), alphabet_.end(), symbol) != alphabet_.end();
}

}  // namespace wristlog
