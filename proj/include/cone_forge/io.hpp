#pragma once

// JSON encodings of every artifact. Each top-level document carries
// "schema": "cone-forge/<kind>/1"; rationals are always "p/q" strings and
// angles are "p/qpi" strings.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "cone_forge/holonomy.hpp"
#include "cone_forge/pattern.hpp"
#include "cone_forge/realize.hpp"
#include "cone_forge/shrink.hpp"
#include "cone_forge/singular_link.hpp"
#include "cone_forge/surfaces.hpp"

namespace cone_forge::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

std::string schema_tag(std::string_view kind);
/// Throws std::invalid_argument unless doc["schema"] names the given kind.
void expect_schema(const Json& doc, std::string_view kind);

Json rational_json(const Rational& r);
Rational rational_from(const Json& j);  // accepts "p/q" strings and integers

Json pattern_json(const EdgePattern& p);
/// Reads {"free_edge_at_vertex": [...]}, also nested under "pattern".
EdgePattern pattern_from(const Json& j);

Json validity_json(const EdgePattern& p);

Json box_json(const BoxSpec& b);
BoxSpec box_from(const Json& j);

Json extent_json(const Extent& e);
Extent extent_from(const Json& j);

Json vec3q_json(const Vec3Q& v);
Vec3Q vec3q_from(const Json& j);
Json vec3_json(const Vec3& v);

Json realization_json(const RealizedPattern& rp);
/// Rebuilds the realization from the stored offsets. Differences between
/// the stored extents or joints and the rebuilt ones are appended to
/// `mismatches` when given.
RealizedPattern realization_from(const Json& j, std::vector<std::string>* mismatches = nullptr);

Json sectors_json(const SectorReport& s);
Json certificate_json(const EdgePattern& p, const BoxSpec& box, const Rational& margin, const RealizationResult& r);

Json link_json(const PolylineLink& link);
Json diagram_json(const LinkDiagram& d);

Json quaternion_json(const UnitQuaternion& q);
Json end_report_json(const EndReport& r);

Json gauss_bonnet_json(const GaussBonnetReport& r);
Json doubled_disc_json(const DoubledDisc& d);

Json pi_list_json(const std::vector<PiMultiple>& xs);
std::vector<PiMultiple> pi_list_from(const Json& j);
Json description_json(const ConeManifoldDescription& d);
ConeManifoldDescription description_from(const Json& j);
Json budget_json(const BudgetReport& r);
Json classification_json(const Classification& c);

Json shrink_state_json(const BoundaryState& s);
Json exploration_json(const Exploration& e);

/// Stable text form: two-space indentation and a trailing newline.
std::string dump(const Json& j);

}  // namespace cone_forge::io
