#include "hbsim/telemetry.hpp"

#include <json.hpp>

#include "hbsim/errors.hpp"

namespace hbsim {

namespace {

constexpr const char* kKeys[] = {
    "seq",     "sent_at_ms",      "device_id",      "collector_id",
    "ts_ms",   "humidity_raw",    "temperature_raw", "co2_ppm",
    "dust_pcs_per_l", "air_quality_code", "vibration_count",
};

std::int64_t get_int(const nlohmann::json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseRejected(std::string("missing key \"") + key + "\"");
    if (!it->is_number_integer()) {
        throw ParseRejected(std::string("key \"") + key + "\" is not an integer");
    }
    return it->get<std::int64_t>();
}

} // namespace

std::string encode_telemetry(const TelemetryMessage& msg) {
    nlohmann::json j;
    j["seq"] = msg.sequence;
    j["sent_at_ms"] = msg.sent_at_ms;
    j["device_id"] = msg.reading.device_id;
    j["collector_id"] = msg.reading.collector_id;
    j["ts_ms"] = msg.reading.utc_timestamp_ms;
    j["humidity_raw"] = msg.reading.humidity_raw;
    j["temperature_raw"] = msg.reading.temperature_raw;
    j["co2_ppm"] = msg.reading.co2_ppm;
    j["dust_pcs_per_l"] = msg.reading.dust_pcs_per_l;
    j["air_quality_code"] = msg.reading.air_quality_code;
    j["vibration_count"] = msg.reading.vibration_count;
    return j.dump();
}

TelemetryMessage parse_telemetry(std::string_view payload) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(payload);
    } catch (const nlohmann::json::exception& e) {
        throw ParseRejected(std::string("malformed telemetry JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseRejected("telemetry payload is not a JSON object");
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool known = false;
        for (const char* k : kKeys) known = known || key == k;
        if (!known) throw ParseRejected("unexpected key \"" + key + "\"");
    }

    TelemetryMessage msg;
    msg.sequence = get_int(j, "seq");
    msg.sent_at_ms = get_int(j, "sent_at_ms");
    msg.reading.device_id = get_int(j, "device_id");
    msg.reading.collector_id = get_int(j, "collector_id");
    msg.reading.utc_timestamp_ms = get_int(j, "ts_ms");
    msg.reading.humidity_raw = get_int(j, "humidity_raw");
    msg.reading.temperature_raw = get_int(j, "temperature_raw");
    msg.reading.co2_ppm = get_int(j, "co2_ppm");
    msg.reading.dust_pcs_per_l = get_int(j, "dust_pcs_per_l");
    msg.reading.air_quality_code = get_int(j, "air_quality_code");
    msg.reading.vibration_count = get_int(j, "vibration_count");
    return msg;
}

} // namespace hbsim
