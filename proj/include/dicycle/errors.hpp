#pragma once

#include <stdexcept>
#include <string>

namespace dicycle {

/// Base of all library errors; name() is a stable identifier such as "SelfLoop".
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& what) : std::runtime_error(what), name_(std::move(name)) {}
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

} // namespace dicycle
