#pragma once

// JSON codec for the /v1/complete protocol, shared by the client and the
// mock server.

#include <json.hpp>

#include "textsynth/client.hpp"

namespace textsynth {

nlohmann::json to_wire(const CompletionRequest& request);
CompletionRequest request_from_wire(const nlohmann::json& body);

inline nlohmann::json response_to_wire(const CompletionResponse& response) {
    nlohmann::json body;
    body["text"] = response.text;
    body["finish_reason"] = std::string(to_string(response.finish_reason));
    return body;
}

}  // namespace textsynth
