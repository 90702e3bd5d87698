#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

namespace entcum {

/// Indeterminates an expression is written in. The T-side works over
/// {m, alpha}; the S-side over {m, n}. The two are bridged only by the
/// substitution alpha = n - m.
enum class VarContext : std::uint8_t { MAlpha, MN };

inline constexpr std::size_t kNumVars = 2;

/// Variable index of `m`; identical in both contexts.
inline constexpr std::size_t kVarM = 0;
/// Variable index of the second indeterminate (alpha or n).
inline constexpr std::size_t kVarSecond = 1;

constexpr std::array<std::string_view, kNumVars> variable_names(VarContext ctx) {
  if (ctx == VarContext::MAlpha) return {"m", "alpha"};
  return {"m", "n"};
}

constexpr std::string_view context_label(VarContext ctx) {
  return ctx == VarContext::MAlpha ? "m,alpha" : "m,n";
}

/// Throws ContextMismatch when a and b differ.
void require_same_context(VarContext a, VarContext b, std::string_view op);

}  // namespace entcum
