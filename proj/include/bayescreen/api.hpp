#pragma once

// Stateless JSON-over-HTTP facade. `handle` is transport independent; the
// server binary only forwards method, path and body to it.

#include <array>
#include <exception>
#include <string>
#include <string_view>

#include "bayescreen/service.hpp"

namespace bayescreen::api {

using service::json;

struct Response {
    int status = 200;
    std::string body;
};

struct Endpoint {
    std::string_view path;
    std::string_view command;
    std::string_view summary;
};

inline constexpr std::array<Endpoint, 17> kEndpoints{{
    {"/v1/ppv", "ppv", "Positive and negative predictive value"},
    {"/v1/threshold", "threshold", "Prevalence threshold and PPV at the threshold"},
    {"/v1/lr", "lr", "Positive likelihood ratio and power class"},
    {"/v1/posttest", "posttest", "Exact and heuristic posttest probability"},
    {"/v1/mcgee", "mcgee", "Linear log-odds heuristic update"},
    {"/v1/pretest", "pretest", "A-priori pretest bounds from finding likelihood ratios"},
    {"/v1/nomogram", "nomogram", "Fagan nomogram line and axis ticks"},
    {"/v1/curve", "curve", "PPV or tipping-point curve"},
    {"/v1/estimate/rogan-gladen", "estimate rogan-gladen", "Rogan-Gladen estimate with Wald interval"},
    {"/v1/estimate/beta", "estimate beta", "Conjugate beta posterior"},
    {"/v1/estimate/baxter", "estimate baxter", "Prevalence posterior with known test parameters"},
    {"/v1/estimate/baxter-unknown", "estimate baxter-unknown",
     "Prevalence posterior with uncertain test parameters"},
    {"/v1/category", "category", "Qualitative risk category"},
    {"/v1/power-class", "power-class", "Clinical power class of a likelihood ratio"},
    {"/v1/audit", "audit", "Heuristic-versus-exact error audit"},
    {"/v1/simulate", "simulate", "Seeded cohort simulation"},
    {"/v1/tables", "tables", "Kappa and pretest reference tables"},
}};

inline json openapi_document() {
    json paths = json::object();
    for (const auto& e : kEndpoints) {
        paths[std::string(e.path)]["post"] = {
            {"summary", e.summary},
            {"x-command", e.command},
            {"requestBody", {{"content", {{"application/json", {{"schema", {{"type", "object"}}}}}}}}},
            {"responses",
             {{"200", {{"description", "envelope with inputs, result and warnings"}}},
              {"400", {{"description", "malformed body; field-level errors"}}},
              {"422", {{"description", "domain error; error carries the engine error name"}}}}}};
    }
    paths["/v1/health"]["get"] = {{"summary", "Liveness and engine version"}};
    paths["/v1/spec"]["get"] = {{"summary", "This document"}};
    return {{"openapi", "3.0.3"},
            {"info", {{"title", "bayescreen"}, {"version", service::kEngineVersion}}},
            {"paths", paths}};
}

inline Response json_response(int status, const json& body) { return {status, body.dump()}; }

inline Response bad_request(const std::string& field, const std::string& message) {
    return json_response(400, {{"error", "InvalidArgument"},
                               {"errors", json::array({{{"field", field}, {"message", message}}})}});
}

inline Response handle(std::string_view method, std::string_view path, std::string_view body) {
    if (path == "/v1/health" || path == "/v1/spec") {
        if (method != "GET") return json_response(405, {{"error", "MethodNotAllowed"}});
        if (path == "/v1/health") {
            return json_response(200, {{"status", "ok"},
                                       {"version", service::kEngineVersion},
                                       {"schema_version", service::kSchemaVersion}});
        }
        return json_response(200, openapi_document());
    }

    const Endpoint* endpoint = nullptr;
    for (const auto& e : kEndpoints) {
        if (e.path == path) endpoint = &e;
    }
    if (!endpoint) return json_response(404, {{"error", "NotFound"}, {"path", path}});
    if (method != "POST") return json_response(405, {{"error", "MethodNotAllowed"}});

    json request = json::object();
    if (!body.empty()) {
        request = json::parse(body, nullptr, false);
        if (request.is_discarded()) return bad_request("body", "is not valid JSON");
        if (!request.is_object()) return bad_request("body", "must be a JSON object");
    }

    const std::string command(endpoint->command);
    try {
        const service::Outcome outcome = service::commands().at(command)(request);
        return json_response(200, service::envelope(command, outcome));
    } catch (const InvalidArgument& e) {
        return bad_request(e.field(), e.detail());
    } catch (const Error& e) {
        return json_response(422, {{"error", e.name()}, {"message", e.what()}});
    } catch (const json::exception& e) {
        return bad_request("body", e.what());
    } catch (const std::exception& e) {
        return json_response(500, {{"error", "Internal"}, {"message", e.what()}});
    }
}

}  // namespace bayescreen::api
