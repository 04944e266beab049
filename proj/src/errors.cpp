#include "pipedrive/errors.hpp"

namespace pipedrive {

std::string format_diagnostics(const std::vector<Diagnostic>& diags)
{
    std::string out;
    for (const auto& d : diags) {
        if (!out.empty()) out += "; ";
        out += d.field + ": " + d.message;
    }
    return out;
}

ValidationError::ValidationError(std::vector<Diagnostic> diags)
    : std::runtime_error("invalid configuration: " + format_diagnostics(diags)),
      diags_(std::move(diags))
{
}

ConfigParseError::ConfigParseError(int line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

} // namespace pipedrive
