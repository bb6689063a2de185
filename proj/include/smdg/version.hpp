#pragma once

#define SMDG_VERSION "0.1.0"
