#pragma once

#include <memory>
#include <string>

#include "json.hpp"

#include "ergoforge/action.hpp"
#include "ergoforge/cocycle.hpp"
#include "ergoforge/coupling.hpp"
#include "ergoforge/forest.hpp"
#include "ergoforge/group.hpp"
#include "ergoforge/window_measure.hpp"

namespace ergoforge {

using Json = nlohmann::json;

// Line-oriented container:
//   !ergodoc <kind> v<version>
//   <key>: <compact json>
// Keys emit in sorted order and rationals as exact "n/d" strings, so a
// document round-trips byte for byte.
struct Document {
  std::string kind;
  int version = 1;
  Json payload;  // object

  static Document make(std::string kind, Json payload);
};

std::string emit_document(const Document& doc);
Document parse_document(const std::string& text);  // errors carry line numbers

Document load_document(const std::string& path);
void store_document(const std::string& path, const Document& doc);

Json rat_to_json(const Rat& r);
Rat rat_from_json(const Json& j);
std::string rat_display(const Rat& r);  // exact value plus decimal rendering

Json table_to_json(const FiniteGroupTable& t);
FiniteGroupTable table_from_json(const Json& j);

Json group_to_json(const GroupContext& ctx);
std::shared_ptr<const GroupContext> group_from_json(const Json& j);

Json window_to_json(const GroupContext& ctx, const Window& w);
Window window_from_json(const GroupContext& ctx, const Json& j);

Json action_to_json(const FiniteAction& a);
FiniteAction action_from_json(const Json& j);

Json labeling_to_json(const Labeling& l);
Labeling labeling_from_json(const Json& j);

Json window_measure_to_json(const GroupContext& ctx, const WindowMeasure& m);
WindowMeasure window_measure_from_json(const GroupContext& ctx, const Json& j);

Json joint_measure_to_json(const GroupContext& ctx, const JointWindowMeasure& m);
JointWindowMeasure joint_measure_from_json(const GroupContext& ctx, const Json& j);

Json cochain_to_json(const GroupContext& ctx, const Cochain& c);
Cochain cochain_from_json(const GroupContext& ctx, const Json& j);

// Cochains on vertex pairs share the "cochain" document kind; the payload key
// "vertices" (vs "support") tells the two apart.
Json window_cochain_to_json(const GroupContext& ctx, const WindowCochain& c);
WindowCochain window_cochain_from_json(const GroupContext& ctx, const Json& j);

// Quotient data rides inside a "group" document under the "quotient" key.
Json quotient_to_json(const GroupContext& ctx, const QuotientData& q);
QuotientData quotient_from_json(const GroupContext& ctx, const Json& j);  // validated

Json forest_to_json(const GroupContext& ctx, const DirectedForest& f);
DirectedForest forest_from_json(const GroupContext& ctx, const Json& j);

Json kernel_to_json(const GroupContext& ctx, const ConfigKernel& k);
ConfigKernel kernel_from_json(const GroupContext& ctx, const Json& j);

Json extension_to_json(const ExtensionTriple& e);
ExtensionTriple extension_from_json(const Json& j);

}  // namespace ergoforge
