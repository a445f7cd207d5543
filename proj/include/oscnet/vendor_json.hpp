// vendor_json.hpp — single include point for the vendored nlohmann/json

#pragma once

#include <json.hpp>
