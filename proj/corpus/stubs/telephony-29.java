permission READ_PHONE_STATE dangerous
permission READ_PRIVILEGED_PHONE_STATE signature
permission ACCESS_COARSE_LOCATION dangerous
permission ACCESS_FINE_LOCATION dangerous
permission READ_SMS dangerous
permission READ_PHONE_NUMBERS dangerous

package android.telephony;

public class TelephonyManager {
    @RequiresPermission(android.Manifest.permission.READ_PRIVILEGED_PHONE_STATE)
    public String getDeviceId();

    @RequiresPermission(android.Manifest.permission.READ_PRIVILEGED_PHONE_STATE)
    public String getImei();

    /**
     * Requires {@link android.Manifest.permission#READ_PHONE_STATE},
     * {@link android.Manifest.permission#READ_SMS} or
     * {@link android.Manifest.permission#READ_PHONE_NUMBERS}.
     */
    public String getLine1Number();

    @RequiresPermission(allOf = {
            android.Manifest.permission.ACCESS_FINE_LOCATION,
            android.Manifest.permission.READ_PHONE_STATE})
    public java.util.List<CellInfo> getAllCellInfo();

    public int getPhoneType();
}
