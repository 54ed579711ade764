//! Frozen benchmark score tables used by the acceptance checks.
//! Columns: MORF, ST, MTS, MTSC, ERC, ERCC.

/// aRRMSE per dataset (12 datasets x 6 methods).
pub const TABLE_ARRMSE: [(&str, [f64; 6]); 12] = [
    ("EDM", [73.38, 74.21, 74.3, 73.96, 74.35, 74.07]),
    ("SF1", [128.25, 113.54, 112.7, 106.8, 105.01, 108.87]),
    ("SF2", [142.48, 114.94, 94.48, 105.53, 105.32, 108.79]),
    ("WQ", [89.94, 90.83, 91.1, 90.95, 90.97, 90.59]),
    ("OES97", [54.9, 52.48, 52.59, 52.43, 52.54, 52.39]),
    ("OES10", [45.18, 42.0, 42.01, 42.05, 42.02, 41.99]),
    ("ATP1d", [42.22, 37.35, 37.16, 37.17, 37.1, 37.24]),
    ("ATP7d", [55.08, 52.48, 51.43, 50.74, 53.43, 51.24]),
    ("SCM1d", [56.63, 47.75, 47.41, 47.01, 47.09, 46.63]),
    ("SCM20d", [77.75, 77.68, 78.62, 78.54, 77.55, 75.97]),
    ("RF1", [85.13, 69.63, 82.37, 69.82, 79.47, 69.89]),
    ("RF2", [91.89, 69.64, 81.75, 69.86, 79.61, 69.82]),
];

/// RRMSE per individual target (114 targets x 6 methods).
pub const TABLE_PER_TARGET: [(&str, [f64; 6]); 114] = [
    ("dflow", [77.54, 81.53, 81.68, 81.23, 81.79, 81.37]),
    ("dgap", [69.22, 66.89, 66.92, 66.7, 66.9, 66.77]),
    ("c-class", [103.46, 101.68, 103.72, 100.08, 100.03, 100.67]),
    ("m-class", [121.16, 109.63, 113.68, 100.5, 99.18, 103.35]),
    ("x-class", [160.12, 129.29, 120.7, 119.81, 115.84, 122.61]),
    ("c-class", [99.59, 98.01, 97.45, 96.36, 97.33, 96.43]),
    ("m-class", [115.95, 107.54, 99.35, 99.2, 102.18, 102.98]),
    ("x-class", [211.89, 139.28, 86.64, 121.04, 116.46, 126.97]),
    ("17300", [89.53, 90.21, 92.1, 91.39, 90.63, 90.79]),
    ("19400", [82.79, 83.42, 82.93, 82.94, 83.55, 82.85]),
    ("25400", [92.38, 92.45, 93.05, 92.81, 92.95, 92.72]),
    ("29600", [97.63, 98.65, 98.62, 98.38, 98.54, 98.26]),
    ("30400", [94.2, 94.52, 94.49, 95.11, 94.37, 94.61]),
    ("33400", [89.32, 91.2, 90.37, 90.23, 91.21, 90.18]),
    ("34500", [95.95, 96.95, 96.14, 96.34, 96.5, 95.71]),
    ("37880", [85.08, 85.57, 84.82, 84.69, 85.68, 84.87]),
    ("38100", [90.7, 91.2, 90.77, 90.8, 91.24, 91.05]),
    ("49700", [79.31, 79.48, 81.49, 80.82, 79.9, 79.57]),
    ("50390", [89.15, 89.16, 90.11, 89.91, 89.21, 89.19]),
    ("55800", [90.32, 92.36, 93.11, 92.88, 92.59, 92.4]),
    ("57500", [89.63, 91.76, 91.73, 91.86, 91.75, 91.42]),
    ("59300", [93.1, 94.67, 95.66, 95.09, 95.42, 94.69]),
    ("13008", [27.17, 33.94, 33.97, 33.74, 33.92, 33.79]),
    ("15014", [46.5, 35.83, 36.54, 35.16, 35.88, 35.24]),
    ("15017", [40.25, 36.49, 36.96, 36.79, 36.47, 36.61]),
    ("21114", [29.07, 30.69, 30.72, 30.82, 30.7, 30.73]),
    ("27108", [63.64, 58.02, 57.63, 57.66, 58.07, 57.7]),
    ("27311", [56.59, 60.08, 59.47, 59.51, 59.9, 59.8]),
    ("32314", [70.43, 61.41, 61.54, 61.72, 61.29, 61.52]),
    ("32511", [75.16, 71.67, 71.5, 71.37, 71.58, 71.42]),
    ("53905", [60.21, 56.89, 57.41, 57.17, 57.0, 57.0]),
    ("58028", [26.46, 33.62, 33.48, 33.69, 33.67, 33.64]),
    ("65032", [53.46, 55.2, 55.43, 55.01, 55.18, 55.14]),
    ("85110", [63.6, 56.69, 57.45, 56.83, 56.68, 56.63]),
    ("92965", [69.84, 64.76, 64.84, 64.73, 64.92, 64.72]),
    ("92998", [70.27, 64.36, 64.16, 64.42, 64.69, 64.25]),
    ("98502", [71.49, 66.49, 66.61, 66.54, 67.05, 66.5]),
    ("98902", [54.28, 53.59, 53.72, 53.63, 53.63, 53.52]),
    ("119032", [40.17, 36.97, 36.89, 37.09, 36.97, 37.01]),
    ("151131", [45.7, 43.05, 43.14, 43.07, 43.1, 43.03]),
    ("151141", [49.61, 43.64, 43.88, 44.05, 43.8, 43.8]),
    ("172141", [59.3, 49.44, 49.63, 49.56, 49.49, 49.45]),
    ("291051", [26.65, 26.46, 26.72, 26.58, 26.51, 26.4]),
    ("291069", [65.01, 61.64, 61.7, 61.63, 61.72, 61.64]),
    ("291127", [44.16, 46.15, 45.28, 45.6, 46.08, 45.78]),
    ("292037", [38.24, 33.49, 33.7, 33.69, 33.53, 33.55]),
    ("292071", [39.32, 38.5, 38.27, 38.16, 38.7, 38.28]),
    ("392021", [39.72, 41.22, 41.25, 41.36, 41.26, 41.24]),
    ("412021", [46.15, 37.66, 37.85, 37.88, 37.63, 37.79]),
    ("419022", [65.44, 64.41, 64.44, 64.44, 64.43, 64.4]),
    ("431011", [22.72, 26.86, 26.72, 27.09, 26.84, 26.9]),
    ("432011", [39.69, 39.15, 39.22, 39.22, 39.19, 39.17]),
    ("513021", [45.34, 43.81, 43.79, 43.72, 43.64, 43.79]),
    ("519061", [55.66, 39.48, 39.67, 39.66, 39.52, 39.55]),
    ("acominpa", [35.63, 24.19, 23.32, 24.16, 24.17, 23.94]),
    ("adlminpa", [42.44, 41.57, 40.46, 40.96, 39.76, 41.2]),
    ("aflminpa", [48.69, 47.12, 47.97, 47.3, 46.97, 47.31]),
    ("allminp0", [43.65, 42.97, 42.0, 42.2, 42.64, 42.79]),
    ("allminpa", [47.36, 48.23, 48.51, 48.19, 48.54, 48.18]),
    ("auaminpa", [35.57, 20.03, 20.71, 20.19, 20.52, 20.05]),
    ("acominpa", [43.71, 31.62, 26.9, 27.81, 29.36, 29.05]),
    ("adlminpa", [52.39, 54.64, 53.32, 53.7, 55.29, 54.21]),
    ("aflminpa", [67.44, 68.92, 72.84, 70.04, 70.74, 69.38]),
    ("allminp0", [60.16, 66.99, 67.22, 65.3, 67.5, 65.99]),
    ("allminpa", [63.56, 64.07, 61.89, 62.93, 69.57, 62.6]),
    ("auaminpa", [43.2, 28.61, 26.43, 24.65, 28.1, 26.23]),
    ("lbl", [51.18, 37.19, 38.01, 36.58, 37.28, 36.87]),
    ("mtlp10", [51.57, 45.13, 40.33, 44.24, 41.83, 44.56]),
    ("mtlp11", [52.21, 47.31, 43.74, 46.34, 44.4, 46.56]),
    ("mtlp12", [56.19, 43.06, 43.8, 43.21, 42.93, 42.96]),
    ("mtlp13", [49.34, 39.18, 39.3, 39.09, 38.67, 38.86]),
    ("mtlp14", [45.45, 37.56, 38.27, 37.37, 37.23, 37.17]),
    ("mtlp15", [45.39, 39.62, 39.05, 39.95, 38.99, 39.54]),
    ("mtlp16", [44.17, 40.97, 39.28, 40.08, 39.72, 40.3]),
    ("mtlp2", [50.47, 38.18, 37.06, 37.32, 36.61, 37.19]),
    ("mtlp3", [53.12, 46.85, 44.02, 43.59, 44.01, 44.1]),
    ("mtlp4", [56.22, 46.98, 50.71, 48.48, 47.34, 46.89]),
    ("mtlp5", [72.79, 59.56, 63.64, 58.87, 64.17, 58.2]),
    ("mtlp6", [76.07, 66.05, 65.82, 64.95, 65.63, 64.77]),
    ("mtlp7", [73.23, 64.51, 64.42, 63.59, 63.82, 61.05]),
    ("mtlp8", [77.48, 70.56, 69.13, 67.74, 70.4, 66.17]),
    ("mtlp9", [51.11, 41.31, 42.07, 40.82, 40.35, 40.83]),
    ("lbl", [65.64, 62.86, 64.9, 62.28, 64.47, 61.76]),
    ("mtlp10a", [76.43, 74.16, 74.04, 77.84, 73.94, 74.76]),
    ("mtlp11a", [77.15, 73.82, 72.48, 76.3, 74.24, 72.43]),
    ("mtlp12a", [81.8, 74.52, 77.69, 78.0, 77.25, 73.03]),
    ("mtlp13a", [77.53, 72.92, 71.98, 72.0, 72.76, 72.22]),
    ("mtlp14a", [75.35, 72.49, 71.41, 73.78, 71.48, 71.93]),
    ("mtlp15a", [74.51, 70.22, 72.8, 72.19, 71.28, 69.19]),
    ("mtlp16a", [75.02, 73.92, 73.98, 73.81, 73.35, 71.91]),
    ("mtlp2a", [65.68, 64.91, 63.84, 64.58, 64.96, 62.2]),
    ("mtlp3a", [64.21, 71.19, 65.77, 67.85, 62.58, 65.17]),
    ("mtlp4a", [69.04, 71.74, 74.78, 72.93, 67.33, 69.11]),
    ("mtlp5a", [91.85, 92.67, 103.83, 93.72, 98.98, 92.68]),
    ("mtlp6a", [94.61, 97.17, 99.64, 99.38, 99.02, 95.8]),
    ("mtlp7a", [89.68, 100.13, 97.33, 96.79, 96.72, 94.43]),
    ("mtlp8a", [94.01, 99.0, 103.54, 101.7, 100.99, 99.27]),
    ("mtlp9a", [71.51, 71.12, 69.9, 73.44, 71.43, 69.62]),
    ("chsi2", [54.98, 49.32, 53.25, 47.64, 50.98, 48.65]),
    ("clkm7", [87.23, 73.81, 74.72, 72.89, 73.71, 73.53]),
    ("dldi4", [94.55, 92.55, 96.02, 100.65, 93.67, 96.6]),
    ("eadm7", [55.52, 52.36, 49.79, 50.5, 50.04, 51.85]),
    ("napm7", [119.36, 58.01, 62.89, 57.48, 59.52, 57.83]),
    ("nasi2", [101.19, 103.84, 100.82, 102.33, 102.83, 103.15]),
    ("sclm7", [75.09, 66.82, 62.56, 64.95, 62.93, 65.86]),
    ("vali2", [93.17, 60.34, 158.93, 62.15, 142.05, 61.62]),
    ("chsi2", [59.04, 49.3, 53.06, 47.56, 51.06, 48.63]),
    ("clkm7", [83.62, 74.09, 75.01, 73.57, 74.0, 74.02]),
    ("dldi4", [92.33, 92.51, 96.0, 100.47, 93.72, 96.43]),
    ("eadm7", [56.91, 52.42, 50.32, 50.35, 50.08, 51.88]),
    ("napm7", [148.9, 58.01, 62.41, 57.09, 59.44, 57.81]),
    ("nasi2", [100.55, 103.9, 100.76, 102.49, 103.01, 103.25]),
    ("sclm7", [95.89, 67.41, 62.5, 66.12, 62.81, 66.38]),
    ("vali2", [97.87, 59.5, 153.91, 61.21, 142.76, 60.15]),
];
