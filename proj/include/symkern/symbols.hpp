#pragma once

#include <cctype>
#include <map>
#include <memory>
#include <string>
#include <string_view>

#include "symkern/error.hpp"

namespace symkern {

/// Declared properties of a symbol. `positive` implies `real`.
struct Assumptions {
    bool real = false;
    bool positive = false;
    bool integer = false;

    Assumptions normalized() const {
        Assumptions a = *this;
        if (a.positive) a.real = true;
        return a;
    }
};

/// A named indeterminate. Records are shared: expressions hold pointers into
/// the session table, so re-declaring a name updates assumptions everywhere.
struct SymbolRecord {
    std::string name;
    Assumptions assumptions;
};

using SymbolPtr = std::shared_ptr<SymbolRecord>;

inline bool valid_symbol_name(std::string_view name) {
    if (name.empty()) return false;
    if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
    for (char c : name.substr(1))
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
    return true;
}

/// Session-wide name -> symbol record map. The only mutable state in the
/// kernel; callers serialize access.
class SymbolTable {
  public:
    /// Declares (or re-declares) a symbol. Re-declaration replaces the
    /// assumptions on the shared record.
    SymbolPtr declare(std::string_view name, Assumptions a = {}) {
        if (!valid_symbol_name(name))
            fail(ErrorKind::InvalidName, "not a valid symbol name: '" + std::string(name) + "'");
        auto it = table_.find(std::string(name));
        if (it != table_.end()) {
            it->second->assumptions = a.normalized();
            return it->second;
        }
        auto rec = std::make_shared<SymbolRecord>(SymbolRecord{std::string(name), a.normalized()});
        table_.emplace(rec->name, rec);
        return rec;
    }

    /// Declares with no assumptions if unknown, otherwise returns the
    /// existing record untouched.
    SymbolPtr intern(std::string_view name) {
        auto it = table_.find(std::string(name));
        if (it != table_.end()) return it->second;
        return declare(name);
    }

    SymbolPtr find(std::string_view name) const {
        auto it = table_.find(std::string(name));
        return it == table_.end() ? nullptr : it->second;
    }

  private:
    std::map<std::string, SymbolPtr, std::less<>> table_;
};

}  // namespace symkern
