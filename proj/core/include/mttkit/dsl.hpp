#pragma once

// Text format for transducers.
//
//   mtt Double {
//     input  { a:1, e:0 }
//     output { f:2, g:2, e:0 }
//     state start:0 init
//     state double:1
//     rule start(a(x1)) -> double[x1](double[x1](e))
//     rule double(e)(y1) -> f(y1,y1)
//     rule double(e)(y1) -> g(y1,y1)
//     rule double(a(x1))(y1) -> double[x1](double[x1](y1))
//   }
//
// `#` starts a comment. An mtt may carry a `tac { states {...} trans ... }`
// block and guarded rules `rule q(s(x1,x2)) when (p1, p2; eq 1 2) -> ...`;
// those are read by parse_tac_mtt. Multi-return transducers use `mrtt`,
// `state q:rank/dimension` and `let (z1,z2) = q[x1](...) in (u1, u2)`.

#include <string>
#include <string_view>

#include "mttkit/multi_return.hpp"
#include "mttkit/mtt.hpp"
#include "mttkit/tac.hpp"

namespace mttkit {

enum class ModelKind { mtt, tac_mtt, mrtt };

/// Classifies a document by its header keyword and the presence of
/// look-ahead syntax. Throws SyntaxError if neither header is found.
ModelKind detect_model_kind(std::string_view text);

/// Parses and validates a plain mtt. Errors carry line:column.
Mtt parse_mtt(std::string_view text);
TacMtt parse_tac_mtt(std::string_view text);
MrMtt parse_mrtt(std::string_view text);

std::string pretty_print(const TacMtt& m);

}  // namespace mttkit
