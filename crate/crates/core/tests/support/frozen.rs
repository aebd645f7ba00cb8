// Frozen regression values computed with independent oracles
// (Sylvester-determinant evaluations and a subresultant gcd route).

/// gcd(Δ, Δ′) for the 137 plane model: (numerator, denominator) per degree.
pub const GCD_DELTA_137: &[(i64, i64)] = &[(-1, 21), (-1, 14), (9, 14), (1, 1)];

/// Δ(x) of the 311 plane model: decimal strings, dense, lowest degree first.
pub const DELTA_311: &[&str] = &[
    "4525943475456",
    "-16024384846080",
    "-250529514998976",
    "288622769878656",
    "4939947216281664",
    "-3094297461610560",
    "-56257997391500688",
    "33715758196747872",
    "436771425497156064",
    "-356665132739439504",
    "-2460118519672817220",
    "2967095121014554488",
    "10056177673353886356",
    "-18163709915099229756",
    "-27511450619187632247",
    "81074160316549974330",
    "32012681737158650727",
    "-258929523092867487246",
    "108432648879500585709",
    "550049928073812227682",
    "-686215751619795612318",
    "-568809598711988487564",
    "1789758684250819715196",
    "-576699503103632747466",
    "-2347255700479663121565",
    "3011705605774125310032",
    "306063980080465028832",
    "-3990875091290870995152",
    "3611724749637908988321",
    "392509157958277169076",
    "-3723626205058806154395",
    "3601237082646071470698",
    "-1099380258626095387503",
    "-1185319308046197104082",
    "1948457826428694712605",
    "-1553005108548797725530",
    "859202722566984173544",
    "-359470538813012027400",
    "117386528582564727930",
    "-30279898510878475818",
    "6190073308279663101",
    "-1004793227442249984",
    "131007146691818394",
    "-14268585004705584",
    "1395161509098105",
    "-126846273617028",
    "9689394263724",
    "-501658294032",
    "12350321424",
];

pub const DEG_DELTA_137: usize = 18;
pub const DEG_R_137: usize = 15;
pub const ROOTS_R_263_MOD_23: &[u64] = &[1];
