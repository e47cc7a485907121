// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_SERIALIZE_HPP
#define NFC_SERIALIZE_HPP

#include <string>

#include "nfc/gradient.hpp"
#include "nfc/linear_code.hpp"

#include <json.hpp>

namespace nfc {

// Insertion-ordered JSON keeps every emitted file byte-stable for a fixed
// input and seed.
using Json = nlohmann::ordered_json;

std::string dump_json(const Json& j);
Json load_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// --- network files -------------------------------------------------------
// { "vertices": [...], "edges": [{"id","tail","head"}...],
//   "sources": [...], "sink": "..." }
Json network_to_json(const NetworkDescription& nd);
NetworkDescription network_from_json(const Json& j);
NetworkPtr load_network_file(const std::string& path);

// --- field specs ---------------------------------------------------------
// { "p": 5, "m": 1, "modulus": [0, 1] }  (modulus low-to-high)
Json field_to_json(const Field& f);
Field field_from_json(const Json& j);

// --- code files ----------------------------------------------------------
/* Field spec, rate, per-edge source coefficients and transfer coefficients,
 * sorted canonically so the file round-trips byte-exactly.  Edges and
 * sources are referenced by name. */
Json code_to_json(const LinearNetworkCode& code);
std::shared_ptr<const LinearNetworkCode> code_from_json(const Json& j,
                                                        NetworkPtr net);

// --- received words ------------------------------------------------------
// whitespace/comma separated field values with `*` marking an erasure
ReceivedWord parse_received_word(const std::string& text, size_t expect_len);
std::string received_word_to_text(const ReceivedWord& w);

// --- gradient files ------------------------------------------------------
Json assignment_to_json(const DataAssignment& a);
DataAssignment assignment_from_json(const Json& j);
Json scheme_to_json(const GradientCodingScheme& s);
GradientCodingScheme scheme_from_json(const Json& j);

}  // namespace nfc

#endif
